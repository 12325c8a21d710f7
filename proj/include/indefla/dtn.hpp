#pragma once

// Per-mode Dirichlet-to-Neumann matrices on the two interface circles.
//
// For the angular mode e^{i m theta}, the harmonic extension into the
// annulus B(r_i, r_e) (interior map) and into the complementary pair
// B(0, r_i) u B(r_e, R) with zero outer-boundary data (exterior map) each
// induce a linear map from Dirichlet traces (phi_i, phi_e) on the circles
// (S_{r_i}, S_{r_e}) to conormal derivatives.  Orientation convention,
// fixed throughout the library:
//
//   interior map rows:  (-d/dr at r_i,  +d/dr at r_e)   (outward from annulus)
//   exterior map rows:  (+d/dr at r_i,  -d/dr at r_e)   (outward from complement)
//
// With U = (r_i/r_e)^{|m|} and V = (r_e/R)^{|m|}, both in (0,1), the maps for
// m != 0 are
//
//   B_m = |m| [ (1/r_i)(1+U^2)/(1-U^2)    -(2/r_i) U/(1-U^2)      ]
//             [ -(2/r_e) U/(1-U^2)         (1/r_e)(1+U^2)/(1-U^2) ]
//   C_m = |m| diag( 1/r_i,  (1/r_e)(1+V^2)/(1-V^2) )
//
// and for m = 0, with L1 = ln(r_e/r_i), L2 = ln(R/r_e),
//
//   B_0 = [ 1/(r_i L1)   -1/(r_i L1) ]     C_0 = [ 0      0        ]
//         [ -1/(r_e L1)   1/(r_e L1) ]           [ 0  1/(r_e L2)   ]
//
// The difference B_m - mu C_m governs the transmission problem; it is
// evaluated in cancellation-free form so that at mu = 1 the exponentially
// small entries (order U^2, V^2) come out to full relative precision:
//
//   (B_m - C_m) = 2|m| [ (1/r_i) U^2/(1-U^2)            -(1/r_i) U/(1-U^2) ]
//                      [ -(1/r_e) U/(1-U^2)   (1/r_e)(U^2/(1-U^2) - V^2/(1-V^2)) ]
//
// and its explicit inverse (always defined for mu = 1, m != 0)
//
//   (B_m - C_m)^{-1} = -(1/(2|m|)) [ r_i (1-(V/U)^2)      r_e (1/U)(1-V^2) ]
//                                  [ r_i (1/U)(1-V^2)     r_e (1-V^2)      ]
//
// All entries have units of inverse length and are stored as ScaledValue so
// arbitrarily large |m| never overflows.  Every map satisfies the weighted
// symmetry r_i * M12 = r_e * M21 (self-adjointness w.r.t. the surface
// measure), which tests verify for random geometries.

#include <complex>
#include <map>
#include <memory>
#include <shared_mutex>

#include "indefla/geometry.hpp"
#include "indefla/scaled.hpp"

namespace indefla {

struct ModeMatrix {
    enum class Kind { interior, exterior, difference, inverse_difference, theta, psi };

    Kind kind = Kind::interior;
    int m = 0;
    ScaledValue e11, e12, e21, e22;
};

// determinant and product in scaled arithmetic (kind of the product result
// is taken from the left factor; used by algebra tests)
ScaledValue mode_matrix_det(const ModeMatrix& a);
ModeMatrix mode_matrix_mul(const ModeMatrix& a, const ModeMatrix& b);

// B_|m|: annulus-interior Dirichlet-to-Neumann map
ModeMatrix interior_dtn_mode(const AnnularGeometry& g, int m);

// C_|m|: exterior map (inner disk and outer annulus with zero data at R)
ModeMatrix exterior_dtn_mode(const AnnularGeometry& g, int m);

// B_|m| - mu * C_|m|, cancellation-free at mu = 1
ModeMatrix difference_mode(const AnnularGeometry& g, double mu, int m);

// (B_|m| - mu C_|m|)^{-1}; throws Error(singular_mode) when the determinant
// vanishes (possible only for mu != 1 at isolated contrasts)
ModeMatrix invert_difference_mode(const AnnularGeometry& g, double mu, int m);

// Per-circle symbol of (1 - Laplace-Beltrami)^{1/2} on the mode:
// w = sqrt(m^2/rho^2 + 1) on the circle of radius rho.
struct LambdaBlock {
    double w_i = 1.0;
    double w_e = 1.0;
};

LambdaBlock lambda_block(const AnnularGeometry& g, int m);

// Theta_m = (1/2) (B_m - mu C_m) diag(w_i, w_e): the interface operator
// whose spectrum collapses (order -infinity) exactly at mu = 1.
ModeMatrix theta_mode(const AnnularGeometry& g, double mu, int m);

// Psi_m = (1/2) diag(sqrt w) (B_m - mu C_m) diag(sqrt w): the symmetrized
// variant, elliptic of order 2 with symbol (1-mu)/2 |xi|^2 for mu != 1.
ModeMatrix psi_mode(const AnnularGeometry& g, double mu, int m);

// Memoized access to difference / inverse matrices for a fixed geometry and
// contrast.  All matrices depend on |m| only, so the cache is keyed on |m|;
// concurrent readers are safe and concurrent writes are idempotent.
class DtnWorkspace {
  public:
    DtnWorkspace(const AnnularGeometry& g, double mu) : geom_(g), mu_(mu) {}

    const AnnularGeometry& geometry() const { return geom_; }
    double mu() const { return mu_; }

    ModeMatrix difference(int m) const;
    ModeMatrix inverse_difference(int m) const;

  private:
    struct Entry {
        ModeMatrix difference;
        ModeMatrix inverse;
    };

    const Entry& entry(int m) const;

    AnnularGeometry geom_;
    double mu_;
    mutable std::shared_mutex mutex_;
    mutable std::map<int, Entry> cache_;
};

}  // namespace indefla
