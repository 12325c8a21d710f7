#pragma once

// Solver for the transmission problem at the critical contrast mu = 1 with a
// radially layered right-hand side supported in the outer annulus.
//
// Pipeline per angular mode m with source amplitude h_m on {a < |x| < b},
// r_e <= a < b <= R:
//
//   1. solve the outer-annulus restriction of -div(coef grad u) = h_m
//      e^{i m theta} 1_{(a,b)}, where the coefficient equals -1 at the
//      critical contrast -- i.e. Delta f = h_m e^{i m theta} 1_{(a,b)} on
//      (r_e, R) -- with f = 0 on both circles;
//   2. read off the Neumann trace f'_m(r_e);
//   3. invert the critical one-sided transmission system for the circle
//      data psi_m = D_m^{-1} (0, -f'_m(r_e));
//   4. synthesize the field: harmonic extension of psi_m inside
//      (0, r_i) u (r_i, r_e) plus, on (r_e, R), f_m plus the complement
//      extension of psi_m.
//
// The solvability of step 3 for the whole series is governed by the critical
// radius a_* = r_e^2 / r_i: amplitudes reaching below a_* (in the sense of
// the weighted series sum_m |h_m|^2 (a_*/a)^{2|m|} / |m|) leave the range of
// the critical operator.  range_check reports the dichotomy before solving.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "indefla/dtn.hpp"
#include "indefla/geometry.hpp"
#include "indefla/poisson.hpp"
#include "indefla/scaled.hpp"

namespace indefla {

// radial support (a, b) of the piecewise-constant source, r_e <= a < b <= R
struct SourceSpec {
    double a = 0.0;
    double b = 0.0;
};

SourceSpec make_source_spec(const AnnularGeometry& g, double a, double b);

// Angular amplitude spectrum: either an explicit finite table h_m, or the
// parametric family h_m = C (1 + |m|)^(-q) s^(|m|) for |m| >= 1.
struct AngularSpectrum {
    enum class Kind { explicit_table, parametric };
    Kind kind = Kind::explicit_table;

    // explicit_table
    std::map<int, std::complex<double>> table;  // mode -> amplitude

    // parametric
    double c = 1.0;
    double q = 0.0;
    double s = 1.0;  // 0 < s

    std::complex<double> amplitude(int m) const;
};

AngularSpectrum make_explicit_spectrum(std::map<int, std::complex<double>> table);
AngularSpectrum make_parametric_spectrum(double c, double q, double s);

// --- Dirichlet solve on the outer annulus -------------------------------

// Piecewise-closed-form solution of
//   f'' + f'/r - m^2 f / r^2 = h 1_(a,b),   f(r_e) = f(R) = 0
// (the mode form of Delta f = h e^{i m theta} on the support).
// Returns one to three pieces covering (r_e, R).
std::vector<RadialPiece> dirichlet_annulus_solve_mode(const AnnularGeometry& g,
                                                      const SourceSpec& s, int m,
                                                      std::complex<double> h);

// Neumann trace f'_m(r_e) of that solution, by closed form (no piece
// evaluation); scaled overload for the membership series.
std::complex<double> neumann_trace_re(const AnnularGeometry& g, const SourceSpec& s, int m,
                                      std::complex<double> h);
ComplexScaled neumann_trace_re_scaled(const AnnularGeometry& g, const SourceSpec& s, int m,
                                      std::complex<double> h);

// --- Range membership ----------------------------------------------------

enum class RangeVerdict { in_range, not_in_range, inconclusive };

const char* range_verdict_name(RangeVerdict v);

struct MembershipReport {
    RangeVerdict verdict = RangeVerdict::inconclusive;
    double ratio = 0.0;          // s^2 (a_*/a)^2 for parametric data, 0 otherwise
    double critical_radius = 0.0;
    double series_total = 0.0;   // sum over computed modes of |psi_m|^2 / |m|
    std::vector<std::pair<int, double>> partial_sums;  // (m, partial) checkpoints
    double tail_estimate = 0.0;  // geometric bound past the last mode (-1 if divergent)
    bool truncation_warning = false;
};

struct RangeCheckOptions {
    int m_max = 64;
    double margin = 0.01;      // dead band around ratio = 1
    double tail_tol = 1e-8;    // warn when tail_estimate exceeds tail_tol * total
    int checkpoint_every = 8;  // partial-sum recording stride
};

MembershipReport range_check(const AnnularGeometry& g, const SourceSpec& s,
                             const AngularSpectrum& spec, const RangeCheckOptions& opt = {});

// --- Critical solve ------------------------------------------------------

// Circle data psi_m = D_m^{-1} (0, -f'_m(r_e)) for one mode.
struct CriticalInterfaceData {
    ComplexScaled on_inner;  // value prescribed on S_{r_i}
    ComplexScaled on_outer;  // value prescribed on S_{r_e}
};

CriticalInterfaceData critical_interface_data(DtnWorkspace& ws, const SourceSpec& s, int m,
                                              std::complex<double> h);

// Full field for one mode (five pieces at most, covering (0, R)).
ModeSolution critical_mode_solution(DtnWorkspace& ws, const SourceSpec& s, int m,
                                    std::complex<double> h);

struct CriticalSolveOptions {
    int m_max = 64;
    bool skip_range_check = false;  // forces a solve even when not_in_range
};

struct CriticalSolution {
    MembershipReport membership;
    std::vector<ModeSolution> modes;  // ascending m over amplitudes that are nonzero
};

// Solves every active mode |m| <= m_max.  Refuses (source_not_in_range) when
// the membership verdict is not_in_range, unless skip_range_check is set.
CriticalSolution solve_critical(DtnWorkspace& ws, const SourceSpec& s,
                                const AngularSpectrum& spec,
                                const CriticalSolveOptions& opt = {});

}  // namespace indefla
