#pragma once

// Mode-wise harmonic extensions and the piecewise radial representation
// shared by every solver in the library.
//
// For the angular mode e^{i m theta} with Dirichlet data phi_i on S_{r_i}
// and phi_e on S_{r_e}:
//
//   annulus extension on (r_i, r_e), m != 0, n = |m|:
//     f(r) = { [(r_e/r)^n - (r/r_e)^n] phi_i + [(r/r_i)^n - (r_i/r)^n] phi_e }
//            / [ (r_e/r_i)^n - (r_i/r_e)^n ]
//   and for m = 0 the logarithmic interpolation
//     f(r) = [ ln(r_e/r) phi_i + ln(r/r_i) phi_e ] / ln(r_e/r_i).
//
//   complement extension: (r/r_i)^n phi_i on the inner disk, and on
//   (r_e, R) the solution with data phi_e at r_e and 0 at R:
//     m != 0:  [(R/r)^n - (r/R)^n] / [(R/r_e)^n - (r_e/R)^n] phi_e
//     m == 0:  ln(R/r)/ln(R/r_e) phi_e.
//
// A RadialPiece stores one radial factor on one interval as coefficients of
// the normalized basis (r/r_ref)^n, (r_ref/r)^n (plus ln r and 1 for m = 0),
// optionally with a canonical particular term for a constant right-hand side
// h of the mode operator u'' + u'/r - m^2 u/r^2 = h:
//
//     |m| not in {0,2}:  h r^2/(4 - m^2)
//     m == 0:            h r^2/4
//     |m| == 2:          h (r^2/4) ln r
//
// Evaluation performs all power computations in scaled arithmetic so a piece
// stays evaluable at any |m| the coefficients can represent.

#include <complex>
#include <optional>
#include <vector>

#include "indefla/geometry.hpp"
#include "indefla/scaled.hpp"

namespace indefla {

struct TraceModeVector {
    int m = 0;
    std::complex<double> on_inner;  // value on S_{r_i}
    std::complex<double> on_outer;  // value on S_{r_e}
};

struct SourceTermRec {
    std::complex<double> strength;  // the constant h in the canonical particular
};

struct RadialPiece {
    double lo = 0.0;
    double hi = 0.0;
    int m = 0;  // stored as |m|
    double r_ref = 1.0;
    std::complex<double> coef_pos;    // multiplies (r/r_ref)^|m|
    std::complex<double> coef_neg;    // multiplies (r_ref/r)^|m|
    std::complex<double> coef_log;    // multiplies ln r   (m = 0 pieces)
    std::complex<double> coef_const;  // multiplies 1      (m = 0 pieces)
    std::optional<SourceTermRec> source_term;
};

// Value / radial derivative at r in [lo, hi] (small relative slack at the
// endpoints); throws Error(out_of_interval) otherwise.
std::complex<double> evaluate_radial(const RadialPiece& piece, double r);
std::complex<double> evaluate_radial_derivative(const RadialPiece& piece, double r);

// Harmonic extension into the annulus; reproduces the traces at the
// endpoints to roundoff.
RadialPiece interior_poisson_mode(const AnnularGeometry& g, const TraceModeVector& trace);

struct ExteriorPoissonModes {
    RadialPiece inner;  // on (0, r_i)
    RadialPiece outer;  // on (r_e, R), zero at R
};

// Harmonic extension into the complement (inner disk + outer annulus).
ExteriorPoissonModes exterior_poisson_mode(const AnnularGeometry& g,
                                           const TraceModeVector& trace);

// One mode of a solved field: non-overlapping pieces covering
// (0, r_i) u (r_i, r_e) u (r_e, R), ordered by radius.
struct ModeSolution {
    int m = 0;
    std::vector<RadialPiece> pieces;
};

// Value at r (0 <= r <= R); picks the covering piece (at a shared endpoint
// the left piece wins; solutions are continuous there anyway).
std::complex<double> evaluate_mode_solution(const ModeSolution& sol, double r);

// Index of the piece evaluate_mode_solution would use, for field dumps.
std::size_t mode_solution_piece_index(const ModeSolution& sol, double r);

namespace detail {

// Scaled-arithmetic basis weights used by both the public constructors and
// the solver synthesis paths (so merged pieces keep full dynamic range).
struct PowerBasisWeights {
    ScaledValue pos;  // contribution to coef_pos per unit trace
    ScaledValue neg;  // contribution to coef_neg per unit trace
};

// annulus extension weights for unit trace at r_i (resp. r_e), m != 0
PowerBasisWeights annulus_weights_inner(const AnnularGeometry& g, std::int64_t n, double r_ref);
PowerBasisWeights annulus_weights_outer(const AnnularGeometry& g, std::int64_t n, double r_ref);
// complement outer piece weights for unit trace at r_e, m != 0
PowerBasisWeights complement_outer_weights(const AnnularGeometry& g, std::int64_t n,
                                           double r_ref);

// endpoint of [lo, hi] nearer the geometric mean, the piece normalization
// convention used across the library
double reference_radius(double lo, double hi);

// canonical particular solution of u'' + u'/r - m^2 u/r^2 = h and its
// radial derivative (see the file comment for the three shapes)
std::complex<double> particular_value(int n, std::complex<double> h, double r);
std::complex<double> particular_derivative(int n, std::complex<double> h, double r);

}  // namespace detail

}  // namespace indefla
