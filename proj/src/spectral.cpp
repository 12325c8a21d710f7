#include "indefla/spectral.hpp"

#include <cmath>

#include "indefla/errors.hpp"

namespace indefla {

namespace {

using SV = ScaledValue;

SV sv(double x) { return SV::from_double(x); }

// eigenvalues of the 2x2 symmetric matrix [[s11, s12], [s12, s22]]:
// t +- sqrt(d^2 + g^2), everything scaled
std::pair<SV, SV> symmetric_eigenvalues(const SV& s11, const SV& s12, const SV& s22) {
    const SV half = sv(0.5);
    const SV t = half * (s11 + s22);
    const SV d = half * (s11 - s22);
    const SV disc = sqrt(d * d + s12 * s12);
    SV lam1 = t + disc;
    SV lam2 = t - disc;
    if (compare_abs(lam1, lam2) < 0) std::swap(lam1, lam2);
    return {lam1, lam2};
}

// off-diagonal of the similarity-symmetrized block: e12 scaled by
// sqrt(d1/d2) where the similarity is diag(sqrt(d1), sqrt(d2))
SV symmetrized_offdiag(const SV& e12, double d1, double d2) {
    return e12 * sqrt(sv(d1 / d2));
}

}  // namespace

std::pair<SV, SV> theta_eigenvalues_scaled(const AnnularGeometry& g, double mu, int m) {
    const ModeMatrix theta = theta_mode(g, mu, m);
    const LambdaBlock w = lambda_block(g, m);
    const SV s12 = symmetrized_offdiag(theta.e12, g.r_i * w.w_i, g.r_e * w.w_e);
    return symmetric_eigenvalues(theta.e11, s12, theta.e22);
}

std::pair<double, double> theta_eigenvalues(const AnnularGeometry& g, double mu, int m) {
    const auto [l1, l2] = theta_eigenvalues_scaled(g, mu, m);
    return {l1.to_double(), l2.to_double()};
}

std::pair<SV, SV> psi_eigenvalues_scaled(const AnnularGeometry& g, double mu, int m) {
    const ModeMatrix psi = psi_mode(g, mu, m);
    const SV s12 = symmetrized_offdiag(psi.e12, g.r_i, g.r_e);
    return symmetric_eigenvalues(psi.e11, s12, psi.e22);
}

std::pair<double, double> psi_eigenvalues(const AnnularGeometry& g, double mu, int m) {
    const auto [l1, l2] = psi_eigenvalues_scaled(g, mu, m);
    return {l1.to_double(), l2.to_double()};
}

const char* regime_name(Regime r) {
    return r == Regime::critical ? "Critical" : "NonCritical";
}

ContrastClassification classify_contrast(const AnnularGeometry& g, double mu,
                                         const ClassifyOptions& opt) {
    make_contrast(mu, 0.0);  // validates mu > 0
    if (opt.window_lo < 5 || opt.window_hi - opt.window_lo + 1 < 10) {
        throw Error(ErrorCode::window_too_small,
                    "classification window must start at mode 5 or above and hold at "
                    "least 10 modes");
    }

    ContrastClassification out;
    out.window_lo = opt.window_lo;
    out.window_hi = opt.window_hi;
    out.regime = (mu == 1.0) ? Regime::critical : Regime::non_critical;

    constexpr double kLn2 = 0.6931471805599453;
    if (out.regime == Regime::critical) {
        std::vector<double> xs, ys;
        for (int m = opt.window_lo; m <= opt.window_hi; ++m) {
            const auto [l1, l2] = theta_eigenvalues_scaled(g, mu, m);
            (void)l2;
            xs.push_back(static_cast<double>(m));
            ys.push_back(l1.log2_abs() * kLn2);  // ln |lambda_max|
        }
        const LineFit fit = fit_line(xs, ys);
        out.decay_rate = fit.slope;
        out.decay_residual = fit.residual;
        return out;
    }

    // non-critical: fit eig(Psi_m)/m^2 against 1/m^2 and read the intercepts
    std::vector<double> xs, ys_max, ys_min;
    bool sign_ok = true;
    const double want_sign = (1.0 - mu) > 0.0 ? 1.0 : -1.0;
    for (int m = opt.window_lo; m <= opt.window_hi; ++m) {
        const auto [l1, l2] = psi_eigenvalues_scaled(g, mu, m);
        const double mm = static_cast<double>(m) * static_cast<double>(m);
        xs.push_back(1.0 / mm);
        ys_max.push_back(l1.to_double() / mm);
        ys_min.push_back(l2.to_double() / mm);
        if (static_cast<double>(l1.sign) * want_sign <= 0.0 ||
            static_cast<double>(l2.sign) * want_sign <= 0.0) {
            sign_ok = false;
        }
    }
    const LineFit fit_max = fit_line(xs, ys_max);
    const LineFit fit_min = fit_line(xs, ys_min);
    out.growth_max = fit_max.intercept;
    out.growth_min = fit_min.intercept;
    out.growth_residual = std::max(fit_max.residual, fit_min.residual);
    out.sign_consistent = sign_ok;
    return out;
}

}  // namespace indefla
