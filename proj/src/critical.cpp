// Critical-contrast transmission solver.
//
// The Dirichlet solve on the outer annulus is written against closed-form
// mode integrals
//
//   Ibar1 = int_a^b s^(1-n) ds,   Ibar2 = int_a^b s^(1+n) ds,
//
// combined algebraically so that no catastrophic cancellation occurs in the
// coefficient of any basis function: in particular the r^n coefficient on
// (a, b) uses the identity
//
//   A2/h = [ b^(2-n)/(n-2) + R^(-2n) Ibar2 - V^2 a^(2-n)/(n-2) ]
//          / (2n (1 - V^2)),        V = (r_e/R)^n,
//
// in which every term is already at the magnitude of the result.  All
// quantities with mode-exponential dynamic range live in ScaledValue.

#include "indefla/critical.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "indefla/errors.hpp"

namespace indefla {

namespace {

using SV = ScaledValue;

SV sv(double x) { return SV::from_double(x); }

// Scaled real weights of the outer-annulus Dirichlet solution; multiply by
// the complex amplitude h to get the piece coefficients.
struct OuterSolveWeights {
    // piece (r_e, a): A p + B q against r_ref1 (log/const for m = 0)
    SV pos1, neg1, log1, const1;
    double ref1 = 1.0;
    // piece (a, b): + canonical particular of unit strength
    SV pos2, neg2, log2, const2;
    double ref2 = 1.0;
    // piece (b, R)
    SV pos3, neg3, log3, const3;
    double ref3 = 1.0;
    // f'(r_e) per unit amplitude
    SV trace;
    bool has_piece1 = false;
    bool has_piece3 = false;
};

OuterSolveWeights outer_solve_weights_m0(const AnnularGeometry& g, const SourceSpec& s) {
    OuterSolveWeights w;
    const double a = s.a, b = s.b, R = g.R, re = g.r_e;
    const double L2 = std::log(R / re);
    const double W = (b * b - a * a) / 4.0 - (a * a / 2.0) * std::log(b / a) +
                     ((b * b - a * a) / 2.0) * std::log(R / b);
    const double c = -W / L2;

    w.has_piece1 = s.a > g.r_e;
    w.has_piece3 = s.b < g.R;
    w.ref1 = detail::reference_radius(re, a);
    w.ref2 = detail::reference_radius(a, b);
    w.ref3 = detail::reference_radius(b, R);

    w.log1 = sv(c);
    w.const1 = sv(-c * std::log(re));

    w.log2 = sv(c - a * a / 2.0);
    w.const2 = sv(-c * std::log(re) - a * a / 4.0 + (a * a / 2.0) * std::log(a));

    w.log3 = sv(c + (b * b - a * a) / 2.0);
    w.const3 = sv(-c * std::log(re) + (b * b - a * a) / 4.0 -
                  (a * a / 2.0) * std::log(b / a) - ((b * b - a * a) / 2.0) * std::log(b));

    w.trace = sv(c / re);
    return w;
}

OuterSolveWeights outer_solve_weights(const AnnularGeometry& g, const SourceSpec& s, int m) {
    const std::int64_t n = std::abs(m);
    if (n == 0) return outer_solve_weights_m0(g, s);

    OuterSolveWeights w;
    const double a = s.a, b = s.b, R = g.R, re = g.r_e;
    w.has_piece1 = a > re;
    w.has_piece3 = b < R;
    w.ref1 = detail::reference_radius(re, a);
    w.ref2 = detail::reference_radius(a, b);
    w.ref3 = detail::reference_radius(b, R);

    // mode integrals over the support
    const SV Ibar1 = (n == 2) ? sv(std::log(b / a))
                              : (pow_int(sv(b), 2 - n) - pow_int(sv(a), 2 - n)) / sv(2.0 - n);
    const SV Ibar2 = (pow_int(sv(b), 2 + n) - pow_int(sv(a), 2 + n)) / sv(2.0 + n);

    const SV V = ratio_pow(re, R, n);
    const SV one_minus_V2 = SV::one() - V * V;
    const SV Rm2n = pow_int(sv(R), -2 * n);
    const SV inv_2n = SV::one() / sv(2.0 * n);

    // S = (Ibar1 - R^(-2n) Ibar2) / (1 - V^2); alpha = -h S / (2n)
    const SV S = (Ibar1 - Rm2n * Ibar2) / one_minus_V2;
    const SV alpha = -(inv_2n * S);
    const SV re_2n = pow_int(sv(re), 2 * n);

    w.trace = -(pow_int(sv(re), n - 1) * S);

    // piece (r_e, a): alpha r^n + beta r^{-n}, beta = -r_e^{2n} alpha
    w.pos1 = alpha * pow_int(sv(w.ref1), n);
    w.neg1 = (re_2n * S) * inv_2n * pow_int(sv(w.ref1), -n);

    // piece (a, b)
    SV A2;
    if (n == 2) {
        A2 = -(sv(0.25) *
               ((sv(std::log(b)) - V * V * sv(std::log(a)) - Rm2n * Ibar2) / one_minus_V2)) -
             sv(1.0 / 16.0);
    } else {
        const SV inv_nm2 = SV::one() / sv(static_cast<double>(n) - 2.0);
        A2 = inv_2n *
             ((pow_int(sv(b), 2 - n) * inv_nm2 + Rm2n * Ibar2 -
               V * V * pow_int(sv(a), 2 - n) * inv_nm2) /
              one_minus_V2);
    }
    const SV B2 = inv_2n * (re_2n * S + pow_int(sv(a), 2 + n) / sv(2.0 + n));
    w.pos2 = A2 * pow_int(sv(w.ref2), n);
    w.neg2 = B2 * pow_int(sv(w.ref2), -n);

    // piece (b, R)
    const SV A3 = inv_2n * ((Ibar2 - re_2n * Ibar1) * Rm2n / one_minus_V2);
    const SV B3 = inv_2n * (re_2n * S - Ibar2);
    w.pos3 = A3 * pow_int(sv(w.ref3), n);
    w.neg3 = B3 * pow_int(sv(w.ref3), -n);
    return w;
}

RadialPiece make_outer_piece(double lo, double hi, int n, double ref, std::complex<double> h,
                             const SV& pos, const SV& neg, const SV& log_w, const SV& const_w,
                             bool with_source) {
    RadialPiece p;
    p.lo = lo;
    p.hi = hi;
    p.m = n;
    p.r_ref = ref;
    if (n == 0) {
        p.coef_log = h * log_w.to_double();
        p.coef_const = h * const_w.to_double();
    } else {
        p.coef_pos = (ComplexScaled::from_complex(h) * ComplexScaled::from_scaled(pos)).to_complex();
        p.coef_neg = (ComplexScaled::from_complex(h) * ComplexScaled::from_scaled(neg)).to_complex();
    }
    if (with_source) p.source_term = SourceTermRec{h};
    return p;
}

std::complex<double> scale_by(const ComplexScaled& z, const SV& weight) {
    return (weight * z).to_complex();
}

}  // namespace

SourceSpec make_source_spec(const AnnularGeometry& g, double a, double b) {
    if (!(a >= g.r_e) || !(b <= g.R) || !(a < b)) {
        throw Error(ErrorCode::validation_error,
                    "source support must satisfy r_e <= a < b <= R");
    }
    return SourceSpec{a, b};
}

std::complex<double> AngularSpectrum::amplitude(int m) const {
    if (kind == Kind::explicit_table) {
        auto it = table.find(m);
        return it == table.end() ? std::complex<double>{} : it->second;
    }
    if (m == 0) return {};
    const int n = std::abs(m);
    // c (1+n)^(-q) s^n; the s-power goes through scaled arithmetic so steep
    // spectra underflow to an honest zero only far beyond double range
    const double poly = std::pow(1.0 + static_cast<double>(n), -q);
    return (sv(c * poly) * ratio_pow(s, 1.0, n)).to_double();
}

AngularSpectrum make_explicit_spectrum(std::map<int, std::complex<double>> table) {
    AngularSpectrum s;
    s.kind = AngularSpectrum::Kind::explicit_table;
    s.table = std::move(table);
    return s;
}

AngularSpectrum make_parametric_spectrum(double c, double q, double s) {
    if (!(s > 0.0) || !std::isfinite(c) || !std::isfinite(q) || !std::isfinite(s)) {
        throw Error(ErrorCode::validation_error,
                    "parametric spectrum requires finite c, q and s > 0");
    }
    AngularSpectrum spec;
    spec.kind = AngularSpectrum::Kind::parametric;
    spec.c = c;
    spec.q = q;
    spec.s = s;
    return spec;
}

std::vector<RadialPiece> dirichlet_annulus_solve_mode(const AnnularGeometry& g,
                                                      const SourceSpec& s, int m,
                                                      std::complex<double> h) {
    const int n = std::abs(m);
    const OuterSolveWeights w = outer_solve_weights(g, s, m);
    std::vector<RadialPiece> pieces;
    if (w.has_piece1) {
        pieces.push_back(make_outer_piece(g.r_e, s.a, n, w.ref1, h, w.pos1, w.neg1, w.log1,
                                          w.const1, false));
    }
    pieces.push_back(
        make_outer_piece(s.a, s.b, n, w.ref2, h, w.pos2, w.neg2, w.log2, w.const2, true));
    if (w.has_piece3) {
        pieces.push_back(
            make_outer_piece(s.b, g.R, n, w.ref3, h, w.pos3, w.neg3, w.log3, w.const3, false));
    }
    return pieces;
}

ComplexScaled neumann_trace_re_scaled(const AnnularGeometry& g, const SourceSpec& s, int m,
                                      std::complex<double> h) {
    const OuterSolveWeights w = outer_solve_weights(g, s, m);
    return w.trace * ComplexScaled::from_complex(h);
}

std::complex<double> neumann_trace_re(const AnnularGeometry& g, const SourceSpec& s, int m,
                                      std::complex<double> h) {
    return neumann_trace_re_scaled(g, s, m, h).to_complex();
}

const char* range_verdict_name(RangeVerdict v) {
    switch (v) {
        case RangeVerdict::in_range: return "InRange";
        case RangeVerdict::not_in_range: return "NotInRange";
        case RangeVerdict::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

// |psi_m|^2 / |m| for one mode at the critical contrast (m != 0)
SV membership_term(const AnnularGeometry& g, const SourceSpec& s, int m,
                   std::complex<double> h) {
    const ModeMatrix inv = invert_difference_mode(g, 1.0, m);
    const ComplexScaled fp = neumann_trace_re_scaled(g, s, m, h);
    const SV fp2 = fp.abs2();
    const SV factor = inv.e12 * inv.e12 + inv.e22 * inv.e22;
    return factor * fp2 / sv(static_cast<double>(std::abs(m)));
}

}  // namespace

MembershipReport range_check(const AnnularGeometry& g, const SourceSpec& s,
                             const AngularSpectrum& spec, const RangeCheckOptions& opt) {
    if (opt.m_max < 1) {
        throw Error(ErrorCode::validation_error, "m_max must be at least 1");
    }
    MembershipReport report;
    report.critical_radius = critical_radius(g);

    SV total = SV::zero();
    SV last_term = SV::zero();
    SV prev_term = SV::zero();

    if (spec.kind == AngularSpectrum::Kind::explicit_table) {
        int count = 0;
        for (const auto& [m, h] : spec.table) {
            if (m == 0 || h == std::complex<double>{}) continue;
            total = total + membership_term(g, s, m, h);
            ++count;
            if (count % opt.checkpoint_every == 0) {
                report.partial_sums.emplace_back(m, total.to_double_clamped());
            }
        }
        report.verdict = RangeVerdict::in_range;  // finite angular support
        report.ratio = 0.0;
        report.series_total = total.to_double_clamped();
        report.tail_estimate = 0.0;
        report.truncation_warning = false;
        return report;
    }

    const double astar = report.critical_radius;
    report.ratio = spec.s * spec.s * (astar / s.a) * (astar / s.a);

    for (int m = 1; m <= opt.m_max; ++m) {
        prev_term = last_term;
        last_term = membership_term(g, s, m, spec.amplitude(m));
        total = total + last_term + last_term;  // modes +-m contribute equally
        if (m % opt.checkpoint_every == 0 || m == opt.m_max) {
            report.partial_sums.emplace_back(m, total.to_double_clamped());
        }
    }
    report.series_total = total.to_double_clamped();

    if (report.ratio <= 1.0 - opt.margin) {
        report.verdict = RangeVerdict::in_range;
        // geometric tail bound: per-mode ratio approaches report.ratio from
        // a polynomially corrected value; take the larger of the asymptotic
        // ratio and the last observed one.
        double r_used = report.ratio;
        if (!prev_term.is_zero() && !last_term.is_zero()) {
            r_used = std::max(r_used, (last_term / prev_term).to_double_clamped());
        }
        if (r_used < 1.0) {
            const SV tail = last_term * sv(2.0 * r_used / (1.0 - r_used));
            report.tail_estimate = tail.to_double_clamped();
            report.truncation_warning =
                report.tail_estimate > opt.tail_tol * std::max(report.series_total, 1e-300);
        } else {
            report.tail_estimate = -1.0;
            report.truncation_warning = true;
        }
    } else if (report.ratio >= 1.0 + opt.margin) {
        report.verdict = RangeVerdict::not_in_range;
        report.tail_estimate = -1.0;
        report.truncation_warning = true;  // partial sums diverge
    } else {
        report.verdict = RangeVerdict::inconclusive;
        report.tail_estimate = -1.0;
        report.truncation_warning = true;
    }
    return report;
}

CriticalInterfaceData critical_interface_data(DtnWorkspace& ws, const SourceSpec& s, int m,
                                              std::complex<double> h) {
    if (ws.mu() != 1.0) {
        throw Error(ErrorCode::validation_error,
                    "the one-sided transmission solve requires the critical contrast mu = 1");
    }
    const ModeMatrix inv = ws.inverse_difference(m);
    const ComplexScaled minus_fp = -neumann_trace_re_scaled(ws.geometry(), s, m, h);
    CriticalInterfaceData data;
    data.on_inner = inv.e12 * minus_fp;
    data.on_outer = inv.e22 * minus_fp;
    return data;
}

ModeSolution critical_mode_solution(DtnWorkspace& ws, const SourceSpec& s, int m,
                                    std::complex<double> h) {
    const AnnularGeometry& g = ws.geometry();
    const int n = std::abs(m);
    const CriticalInterfaceData psi = critical_interface_data(ws, s, m, h);

    ModeSolution sol;
    sol.m = m;

    // inner disk: complement extension of psi_i
    RadialPiece inner;
    inner.lo = 0.0;
    inner.hi = g.r_i;
    inner.m = n;
    inner.r_ref = g.r_i;
    if (n == 0) {
        inner.coef_const = psi.on_inner.to_complex();
    } else {
        inner.coef_pos = psi.on_inner.to_complex();
    }
    sol.pieces.push_back(inner);

    // annulus: harmonic interpolation of (psi_i, psi_e)
    RadialPiece mid;
    mid.lo = g.r_i;
    mid.hi = g.r_e;
    mid.m = n;
    mid.r_ref = detail::reference_radius(g.r_i, g.r_e);
    if (n == 0) {
        const double L1 = std::log(g.r_e / g.r_i);
        const std::complex<double> pi = psi.on_inner.to_complex();
        const std::complex<double> pe = psi.on_outer.to_complex();
        mid.coef_log = (pe - pi) / L1;
        mid.coef_const = (pi * std::log(g.r_e) - pe * std::log(g.r_i)) / L1;
    } else {
        const auto wi = detail::annulus_weights_inner(g, n, mid.r_ref);
        const auto we = detail::annulus_weights_outer(g, n, mid.r_ref);
        mid.coef_pos = (wi.pos * psi.on_inner + we.pos * psi.on_outer).to_complex();
        mid.coef_neg = (wi.neg * psi.on_inner + we.neg * psi.on_outer).to_complex();
    }
    sol.pieces.push_back(mid);

    // outer annulus: Dirichlet solve plus complement extension of psi_e
    std::vector<RadialPiece> outer = dirichlet_annulus_solve_mode(g, s, m, h);
    for (RadialPiece& p : outer) {
        if (n == 0) {
            const double L2 = std::log(g.R / g.r_e);
            const std::complex<double> pe = psi.on_outer.to_complex();
            p.coef_log += -pe / L2;
            p.coef_const += pe * std::log(g.R) / L2;
        } else {
            const auto w = detail::complement_outer_weights(g, n, p.r_ref);
            p.coef_pos =
                (ComplexScaled::from_complex(p.coef_pos) + w.pos * psi.on_outer).to_complex();
            p.coef_neg =
                (ComplexScaled::from_complex(p.coef_neg) + w.neg * psi.on_outer).to_complex();
        }
        sol.pieces.push_back(p);
    }
    return sol;
}

CriticalSolution solve_critical(DtnWorkspace& ws, const SourceSpec& s,
                                const AngularSpectrum& spec, const CriticalSolveOptions& opt) {
    CriticalSolution out;
    RangeCheckOptions rc;
    rc.m_max = opt.m_max;
    out.membership = range_check(ws.geometry(), s, spec, rc);
    if (out.membership.verdict == RangeVerdict::not_in_range && !opt.skip_range_check) {
        throw Error(ErrorCode::source_not_in_range,
                    "amplitude spectrum reaches below the critical radius; the series "
                    "solution diverges (ratio " +
                        std::to_string(out.membership.ratio) + ")");
    }

    if (spec.kind == AngularSpectrum::Kind::explicit_table) {
        for (const auto& [m, h] : spec.table) {
            if (h == std::complex<double>{}) continue;
            out.modes.push_back(critical_mode_solution(ws, s, m, h));
        }
    } else {
        for (int m = 1; m <= opt.m_max; ++m) {
            out.modes.push_back(critical_mode_solution(ws, s, m, spec.amplitude(m)));
        }
    }
    return out;
}

}  // namespace indefla
