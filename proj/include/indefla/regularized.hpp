#pragma once

// Regularized transmission solver and blow-up diagnostics.
//
// For delta > 0 the coefficient becomes complex,
//
//   c1 = -mu + i delta on (0, r_i),
//   c2 =   1 + i delta on (r_i, r_e),
//   c3 = -mu + i delta on (r_e, R),
//
// and each mode solves -c_k (u'' + u'/r - m^2 u/r^2) = h_m 1_(a,b) with
// regularity at 0, u(R) = 0, and continuity of u and of c u' at r_i, r_e.
// The unknowns are the six basis coefficients (two per region, against
// region-normalized bases); the system is assembled and eliminated in
// complex scaled arithmetic so it stays solvable when delta is small and
// |m| is large, where raw-basis conditioning degrades like (R/r_i)^(2|m|).
//
// The delta sweep solves all modes for each delta, accumulates squared
// H1 norms per region (inner disk, annulus, outer annulus), fits
// ln ||u||^2 against ln delta, and flags each region bounded/unbounded.

#include <complex>
#include <optional>
#include <vector>

#include "indefla/critical.hpp"
#include "indefla/fitting.hpp"
#include "indefla/geometry.hpp"
#include "indefla/poisson.hpp"

namespace indefla {

// Solves one mode for delta > 0 (validated); h is the mode amplitude.
// Throws Error(singular_system) when the assembled 6x6 system is singular.
ModeSolution solve_regularized_mode(const AnnularGeometry& g, const Contrast& c, int m,
                                    const SourceSpec& s, std::complex<double> h = {1.0, 0.0});

namespace detail {

// Signed-delta variant (delta may be negative or zero) used by the
// conjugation-symmetry tests and the delta -> 0 consistency checks.
ModeSolution solve_signed_delta_mode(const AnnularGeometry& g, double mu, double delta, int m,
                                     const SourceSpec& s, std::complex<double> h);

}  // namespace detail

// Squared H1 norms per region: integral of (|u'|^2 + m^2 |u|^2 / r^2 +
// |u|^2) r dr, angular factor 2 pi omitted throughout the library.  Pieces
// built from the power/log basis integrate in closed form; pieces carrying a
// particular term fall back to adaptive quadrature (relative 1e-9).
struct H1Norms {
    double disk = 0.0;     // B_{r_i}
    double annulus = 0.0;  // B_{r_i, r_e}
    double outer = 0.0;    // B_{r_e, R}
};

H1Norms h1_norms(const ModeSolution& solution, const AnnularGeometry& g);

double piece_h1_sq(const RadialPiece& piece);  // one piece's contribution

struct DeltaSweepRow {
    double delta = 0.0;
    double annulus_h1_sq = 0.0;
    double outer_h1_sq = 0.0;
    double disk_h1_sq = 0.0;
};

struct RegionTrend {
    double fitted_p = 0.0;        // from ln(norm^2) ~ -p ln(delta)
    double ratio_last_first = 0.0;  // norm^2 at smallest delta / at largest
    bool unbounded = false;       // ratio > 2 and fitted_p > 0.1
};

struct DeltaSweepReport {
    std::vector<DeltaSweepRow> rows;  // strictly decreasing delta
    double exponent_p = 0.0;          // annulus-region exponent
    double fit_residual = 0.0;
    int fit_points = 0;
    RegionTrend annulus, outer, disk;
    // set when a delta failed with a singular system; rows cover the
    // deltas completed before the failure
    std::optional<double> failed_delta;
};

struct SweepOptions {
    int m_max = 64;
    int threads = 1;  // parallel (delta, m) schedule; reduction order is fixed
    // the largest `discard_largest` deltas are treated as pre-asymptotic and
    // excluded from the exponent fit (reduced automatically so that at least
    // four points remain)
    int discard_largest = 2;
};

// Default grid 10^-1, 10^-1.5, ..., 10^-5 (9 points).
std::vector<double> default_delta_grid();

DeltaSweepReport delta_sweep(const AnnularGeometry& g, double mu, const SourceSpec& s,
                             const AngularSpectrum& spectrum, std::vector<double> deltas,
                             const SweepOptions& opt = {});

}  // namespace indefla
