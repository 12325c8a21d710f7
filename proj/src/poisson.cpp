// Piecewise radial representation and mode-wise harmonic extensions.
//
// All basis powers are formed with ScaledValue ratio powers, and every
// public constructor normalizes against a reference radius inside the
// interval so the stored coefficients stay at field magnitude.

#include "indefla/poisson.hpp"

#include <cmath>
#include <cstdlib>

#include "indefla/errors.hpp"

namespace indefla {

namespace {

using SV = ScaledValue;

// relative slack admitted at interval endpoints
constexpr double kEndpointSlack = 1e-9;

bool inside_with_slack(const RadialPiece& piece, double r) {
    const double span = piece.hi - piece.lo;
    const double slack = kEndpointSlack * span;
    return r >= piece.lo - slack && r <= piece.hi + slack;
}

}  // namespace

namespace detail {

std::complex<double> particular_value(int n, std::complex<double> h, double r) {
    if (r == 0.0) return {0.0, 0.0};
    if (n == 0) return h * (r * r / 4.0);
    if (n == 2) return h * (r * r / 4.0) * std::log(r);
    return h * (r * r / (4.0 - static_cast<double>(n) * static_cast<double>(n)));
}

std::complex<double> particular_derivative(int n, std::complex<double> h, double r) {
    if (r == 0.0) return {0.0, 0.0};
    if (n == 0) return h * (r / 2.0);
    if (n == 2) return h * (2.0 * r * std::log(r) + r) / 4.0;
    return h * (2.0 * r / (4.0 - static_cast<double>(n) * static_cast<double>(n)));
}

}  // namespace detail

std::complex<double> evaluate_radial(const RadialPiece& piece, double r) {
    if (!inside_with_slack(piece, r)) {
        throw Error(ErrorCode::out_of_interval,
                    "radius outside the interval of this radial piece");
    }
    const int n = std::abs(piece.m);
    std::complex<double> value = piece.coef_const;
    if (r == 0.0) {
        // limit values: positive powers vanish for n > 0, logs never reach
        // r = 0 in a well-formed inner piece
        if (piece.coef_log != std::complex<double>{} ||
            (n > 0 && piece.coef_neg != std::complex<double>{})) {
            throw Error(ErrorCode::out_of_interval,
                        "radial piece is singular at r = 0");
        }
        if (n == 0) value += piece.coef_pos + piece.coef_neg;
        return value;  // particular terms vanish at r = 0
    }
    if (n == 0) {
        value += piece.coef_pos + piece.coef_neg;
        if (piece.coef_log != std::complex<double>{}) value += piece.coef_log * std::log(r);
    } else {
        const SV up = ratio_pow(r, piece.r_ref, n);
        const SV dn = ratio_pow(piece.r_ref, r, n);
        ComplexScaled acc = ComplexScaled::from_complex(piece.coef_pos) * ComplexScaled::from_scaled(up);
        acc = acc + ComplexScaled::from_complex(piece.coef_neg) * ComplexScaled::from_scaled(dn);
        value += acc.to_complex();
        if (piece.coef_log != std::complex<double>{}) value += piece.coef_log * std::log(r);
    }
    if (piece.source_term) value += detail::particular_value(n, piece.source_term->strength, r);
    return value;
}

std::complex<double> evaluate_radial_derivative(const RadialPiece& piece, double r) {
    if (!inside_with_slack(piece, r)) {
        throw Error(ErrorCode::out_of_interval,
                    "radius outside the interval of this radial piece");
    }
    const int n = std::abs(piece.m);
    if (r == 0.0) {
        if (piece.coef_log != std::complex<double>{} ||
            (n > 0 && piece.coef_neg != std::complex<double>{})) {
            throw Error(ErrorCode::out_of_interval,
                        "radial piece is singular at r = 0");
        }
        if (n == 1) {
            // d/dr (r/r_ref) at the origin
            return piece.coef_pos / piece.r_ref;
        }
        return {0.0, 0.0};
    }
    std::complex<double> value;
    if (n == 0) {
        if (piece.coef_log != std::complex<double>{}) value += piece.coef_log / r;
    } else {
        const SV up = ratio_pow(r, piece.r_ref, n);
        const SV dn = ratio_pow(piece.r_ref, r, n);
        const SV n_over_r = SV::from_double(static_cast<double>(n) / r);
        ComplexScaled acc =
            ComplexScaled::from_complex(piece.coef_pos) * ComplexScaled::from_scaled(up * n_over_r);
        acc = acc - ComplexScaled::from_complex(piece.coef_neg) * ComplexScaled::from_scaled(dn * n_over_r);
        value += acc.to_complex();
        if (piece.coef_log != std::complex<double>{}) value += piece.coef_log / r;
    }
    if (piece.source_term) {
        value += detail::particular_derivative(n, piece.source_term->strength, r);
    }
    return value;
}

namespace detail {

double reference_radius(double lo, double hi) {
    const double gm = std::sqrt(lo * hi);
    return (gm - lo <= hi - gm) ? lo : hi;
}

PowerBasisWeights annulus_weights_inner(const AnnularGeometry& g, std::int64_t n, double r_ref) {
    // coefficient of phi_i: [ (r_e/r)^n - (r/r_e)^n ] / D with
    // D = (r_e/r_i)^n - (r_i/r_e)^n; normalized against r_ref.
    const SV U = ratio_pow(g.r_i, g.r_e, n);
    const SV denom = (SV::one() - U * U) / U;  // D = 1/U - U
    PowerBasisWeights w;
    w.neg = ratio_pow(g.r_e, r_ref, n) / denom;
    w.pos = -(ratio_pow(r_ref, g.r_e, n) / denom);
    return w;
}

PowerBasisWeights annulus_weights_outer(const AnnularGeometry& g, std::int64_t n, double r_ref) {
    // coefficient of phi_e: [ (r/r_i)^n - (r_i/r)^n ] / D
    const SV U = ratio_pow(g.r_i, g.r_e, n);
    const SV denom = (SV::one() - U * U) / U;
    PowerBasisWeights w;
    w.pos = ratio_pow(r_ref, g.r_i, n) / denom;
    w.neg = -(ratio_pow(g.r_i, r_ref, n) / denom);
    return w;
}

PowerBasisWeights complement_outer_weights(const AnnularGeometry& g, std::int64_t n,
                                           double r_ref) {
    // coefficient of phi_e: [ (R/r)^n - (r/R)^n ] / D_e with
    // D_e = (R/r_e)^n - (r_e/R)^n = (1 - V^2)/V
    const SV V = ratio_pow(g.r_e, g.R, n);
    const SV denom = (SV::one() - V * V) / V;
    PowerBasisWeights w;
    w.neg = ratio_pow(g.R, r_ref, n) / denom;
    w.pos = -(ratio_pow(r_ref, g.R, n) / denom);
    return w;
}

}  // namespace detail

RadialPiece interior_poisson_mode(const AnnularGeometry& g, const TraceModeVector& trace) {
    RadialPiece piece;
    piece.lo = g.r_i;
    piece.hi = g.r_e;
    piece.m = std::abs(trace.m);
    piece.r_ref = detail::reference_radius(g.r_i, g.r_e);
    if (piece.m == 0) {
        const double L1 = std::log(g.r_e / g.r_i);
        piece.coef_log = (trace.on_outer - trace.on_inner) / L1;
        piece.coef_const =
            (trace.on_inner * std::log(g.r_e) - trace.on_outer * std::log(g.r_i)) / L1;
        return piece;
    }
    const auto wi = detail::annulus_weights_inner(g, piece.m, piece.r_ref);
    const auto we = detail::annulus_weights_outer(g, piece.m, piece.r_ref);
    piece.coef_pos = trace.on_inner * wi.pos.to_double() + trace.on_outer * we.pos.to_double();
    piece.coef_neg = trace.on_inner * wi.neg.to_double() + trace.on_outer * we.neg.to_double();
    return piece;
}

ExteriorPoissonModes exterior_poisson_mode(const AnnularGeometry& g,
                                           const TraceModeVector& trace) {
    ExteriorPoissonModes out;
    const int n = std::abs(trace.m);

    out.inner.lo = 0.0;
    out.inner.hi = g.r_i;
    out.inner.m = n;
    out.inner.r_ref = g.r_i;
    if (n == 0) {
        out.inner.coef_const = trace.on_inner;
    } else {
        out.inner.coef_pos = trace.on_inner;  // (r/r_i)^n phi_i
    }

    out.outer.lo = g.r_e;
    out.outer.hi = g.R;
    out.outer.m = n;
    out.outer.r_ref = detail::reference_radius(g.r_e, g.R);
    if (n == 0) {
        const double L2 = std::log(g.R / g.r_e);
        out.outer.coef_log = -trace.on_outer / L2;
        out.outer.coef_const = trace.on_outer * std::log(g.R) / L2;
    } else {
        const auto w = detail::complement_outer_weights(g, n, out.outer.r_ref);
        out.outer.coef_pos = trace.on_outer * w.pos.to_double();
        out.outer.coef_neg = trace.on_outer * w.neg.to_double();
    }
    return out;
}

std::size_t mode_solution_piece_index(const ModeSolution& sol, double r) {
    if (sol.pieces.empty()) {
        throw Error(ErrorCode::out_of_interval, "mode solution has no pieces");
    }
    for (std::size_t k = 0; k < sol.pieces.size(); ++k) {
        if (inside_with_slack(sol.pieces[k], r)) return k;
    }
    throw Error(ErrorCode::out_of_interval, "radius not covered by any piece");
}

std::complex<double> evaluate_mode_solution(const ModeSolution& sol, double r) {
    return evaluate_radial(sol.pieces[mode_solution_piece_index(sol, r)], r);
}

}  // namespace indefla
