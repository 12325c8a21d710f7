#include "indefla/dtn.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

namespace indefla {

namespace {

using SV = ScaledValue;

SV sv(double x) { return SV::from_double(x); }

// shared per-mode quantities for m != 0
struct ModeRatios {
    std::int64_t n;   // |m|
    SV U;             // (r_i/r_e)^n
    SV V;             // (r_e/R)^n
    SV one_minus_U2;  // 1 - U^2
    SV one_minus_V2;  // 1 - V^2
};

ModeRatios mode_ratios(const AnnularGeometry& g, int m) {
    ModeRatios r;
    r.n = std::llabs(static_cast<long long>(m));
    r.U = ratio_pow(g.r_i, g.r_e, r.n);
    r.V = ratio_pow(g.r_e, g.R, r.n);
    r.one_minus_U2 = SV::one() - r.U * r.U;
    r.one_minus_V2 = SV::one() - r.V * r.V;
    return r;
}

}  // namespace

ScaledValue mode_matrix_det(const ModeMatrix& a) {
    return a.e11 * a.e22 - a.e12 * a.e21;
}

ModeMatrix mode_matrix_mul(const ModeMatrix& a, const ModeMatrix& b) {
    ModeMatrix r;
    r.kind = a.kind;
    r.m = a.m;
    r.e11 = a.e11 * b.e11 + a.e12 * b.e21;
    r.e12 = a.e11 * b.e12 + a.e12 * b.e22;
    r.e21 = a.e21 * b.e11 + a.e22 * b.e21;
    r.e22 = a.e21 * b.e12 + a.e22 * b.e22;
    return r;
}

ModeMatrix interior_dtn_mode(const AnnularGeometry& g, int m) {
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::interior;
    out.m = m;
    if (m == 0) {
        double L1 = std::log(g.r_e / g.r_i);
        out.e11 = sv(1.0 / (g.r_i * L1));
        out.e12 = sv(-1.0 / (g.r_i * L1));
        out.e21 = sv(-1.0 / (g.r_e * L1));
        out.e22 = sv(1.0 / (g.r_e * L1));
        return out;
    }
    ModeRatios q = mode_ratios(g, m);
    SV n = sv(static_cast<double>(q.n));
    SV coth = (SV::one() + q.U * q.U) / q.one_minus_U2;   // (1+U^2)/(1-U^2)
    SV csch2 = (sv(2.0) * q.U) / q.one_minus_U2;          // 2U/(1-U^2)
    out.e11 = n * coth / sv(g.r_i);
    out.e12 = -(n * csch2 / sv(g.r_i));
    out.e21 = -(n * csch2 / sv(g.r_e));
    out.e22 = n * coth / sv(g.r_e);
    return out;
}

ModeMatrix exterior_dtn_mode(const AnnularGeometry& g, int m) {
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::exterior;
    out.m = m;
    if (m == 0) {
        double L2 = std::log(g.R / g.r_e);
        out.e11 = SV::zero();
        out.e12 = SV::zero();
        out.e21 = SV::zero();
        out.e22 = sv(1.0 / (g.r_e * L2));
        return out;
    }
    ModeRatios q = mode_ratios(g, m);
    SV n = sv(static_cast<double>(q.n));
    out.e11 = n / sv(g.r_i);
    out.e12 = SV::zero();
    out.e21 = SV::zero();
    out.e22 = n * ((SV::one() + q.V * q.V) / q.one_minus_V2) / sv(g.r_e);
    return out;
}

ModeMatrix difference_mode(const AnnularGeometry& g, double mu, int m) {
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::difference;
    out.m = m;
    if (m == 0) {
        double L1 = std::log(g.r_e / g.r_i);
        double L2 = std::log(g.R / g.r_e);
        out.e11 = sv(1.0 / (g.r_i * L1));
        out.e12 = sv(-1.0 / (g.r_i * L1));
        out.e21 = sv(-1.0 / (g.r_e * L1));
        out.e22 = sv(1.0 / (g.r_e * L1) - mu / (g.r_e * L2));
        return out;
    }
    ModeRatios q = mode_ratios(g, m);
    SV n = sv(static_cast<double>(q.n));
    SV U2 = q.U * q.U;
    SV V2 = q.V * q.V;
    // (1+U^2)/(1-U^2) - mu = ((1-mu) + (1+mu) U^2) / (1-U^2); the numerator is
    // assembled term by term so mu = 1 cancels algebraically, not in floating
    // point, keeping the O(U^2) entry at full relative accuracy.
    SV one_minus_mu = sv(1.0 - mu);   // exact 0 at mu == 1
    SV one_plus_mu = sv(1.0 + mu);
    out.e11 = n * ((one_minus_mu + one_plus_mu * U2) / q.one_minus_U2) / sv(g.r_i);
    SV csch2 = (sv(2.0) * q.U) / q.one_minus_U2;
    out.e12 = -(n * csch2 / sv(g.r_i));
    out.e21 = -(n * csch2 / sv(g.r_e));
    // (1+U^2)/(1-U^2) - mu (1+V^2)/(1-V^2)
    //   = [ (1-mu)(1 - U^2 V^2) + (1+mu)(U^2 - V^2) ] / [ (1-U^2)(1-V^2) ]
    SV num = one_minus_mu * (SV::one() - U2 * V2) + one_plus_mu * (U2 - V2);
    out.e22 = n * (num / (q.one_minus_U2 * q.one_minus_V2)) / sv(g.r_e);
    return out;
}

ModeMatrix invert_difference_mode(const AnnularGeometry& g, double mu, int m) {
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::inverse_difference;
    out.m = m;
    if (m == 0) {
        // [[x, -x], [-y, y - mu z]] has determinant -mu x z, never zero.
        double L1 = std::log(g.r_e / g.r_i);
        double L2 = std::log(g.R / g.r_e);
        double x = 1.0 / (g.r_i * L1);
        double y = 1.0 / (g.r_e * L1);
        double z = 1.0 / (g.r_e * L2);
        double det = -mu * x * z;
        out.e11 = sv((y - mu * z) / det);
        out.e12 = sv(x / det);
        out.e21 = sv(y / det);
        out.e22 = sv(x / det);
        return out;
    }
    if (mu == 1.0) {
        // explicit inverse; always defined since U, V are in (0, 1)
        ModeRatios q = mode_ratios(g, m);
        SV two_n = sv(2.0 * static_cast<double>(q.n));
        SV VU = q.V / q.U;  // = (r_e^2/(r_i R))^n, may exceed 1
        SV f = q.one_minus_V2 / q.U;
        out.e11 = -(sv(g.r_i) * (SV::one() - VU * VU) / two_n);
        out.e12 = -(sv(g.r_e) * f / two_n);
        out.e21 = -(sv(g.r_i) * f / two_n);
        out.e22 = -(sv(g.r_e) * q.one_minus_V2 / two_n);
        return out;
    }
    ModeMatrix d = difference_mode(g, mu, m);
    SV p1 = d.e11 * d.e22;
    SV p2 = d.e12 * d.e21;
    SV det = p1 - p2;
    SV scale = abs(p1) + abs(p2);
    // relative near-singularity test; exact zeros occur at the isolated
    // critical contrasts of the geometry
    if (det.is_zero() || !(sv(1e-12) * scale < abs(det)))
        throw Error(ErrorCode::singular_mode,
                    "interface difference matrix is singular for mu=" + std::to_string(mu) +
                        ", m=" + std::to_string(m));
    out.e11 = d.e22 / det;
    out.e12 = -(d.e12 / det);
    out.e21 = -(d.e21 / det);
    out.e22 = d.e11 / det;
    return out;
}

LambdaBlock lambda_block(const AnnularGeometry& g, int m) {
    double mm = std::fabs(static_cast<double>(m));
    return LambdaBlock{std::hypot(mm / g.r_i, 1.0), std::hypot(mm / g.r_e, 1.0)};
}

ModeMatrix theta_mode(const AnnularGeometry& g, double mu, int m) {
    ModeMatrix a = difference_mode(g, mu, m);
    LambdaBlock w = lambda_block(g, m);
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::theta;
    out.m = m;
    SV half = sv(0.5);
    out.e11 = half * a.e11 * sv(w.w_i);
    out.e12 = half * a.e12 * sv(w.w_e);
    out.e21 = half * a.e21 * sv(w.w_i);
    out.e22 = half * a.e22 * sv(w.w_e);
    return out;
}

ModeMatrix psi_mode(const AnnularGeometry& g, double mu, int m) {
    ModeMatrix a = difference_mode(g, mu, m);
    LambdaBlock w = lambda_block(g, m);
    ModeMatrix out;
    out.kind = ModeMatrix::Kind::psi;
    out.m = m;
    SV half = sv(0.5);
    SV si = sv(std::sqrt(w.w_i));
    SV se = sv(std::sqrt(w.w_e));
    out.e11 = half * si * a.e11 * si;
    out.e12 = half * si * a.e12 * se;
    out.e21 = half * se * a.e21 * si;
    out.e22 = half * se * a.e22 * se;
    return out;
}

ModeMatrix DtnWorkspace::difference(int m) const { return entry(m).difference; }

ModeMatrix DtnWorkspace::inverse_difference(int m) const { return entry(m).inverse; }

const DtnWorkspace::Entry& DtnWorkspace::entry(int m) const {
    int key = std::abs(m);
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Entry e;
    e.difference = difference_mode(geom_, mu_, key);
    e.inverse = invert_difference_mode(geom_, mu_, key);
    std::unique_lock lock(mutex_);
    // emplace is idempotent: a concurrent writer computing the same |m|
    // produces identical entries, the first insert wins
    return cache_.emplace(key, e).first->second;
}

}  // namespace indefla
