#pragma once

// Contrast-dichotomy diagnostics on the interface mode blocks.
//
// At the critical contrast the Theta blocks' eigenvalues collapse to 0
// exponentially in |m| (the interface operator is smoothing); away from it
// the symmetrized Psi blocks grow like m^2 with the sign of (1 - mu)
// (ellipticity).  Both facts are measured here: eigenvalues per mode and
// least-squares fits over a mode window.
//
// Eigenvalues are computed from similarity-symmetrized blocks, entirely in
// scaled arithmetic, so decay can be followed far below double underflow:
//   Theta_m is symmetrized by diag(sqrt(r_i w_i), sqrt(r_e w_e)),
//   Psi_m   is symmetrized by diag(sqrt(r_i),     sqrt(r_e)),
// which both exist because of the weighted symmetry r_i A_12 = r_e A_21 of
// the underlying difference block A = B_m - mu C_m.

#include <utility>
#include <vector>

#include "indefla/dtn.hpp"
#include "indefla/fitting.hpp"
#include "indefla/geometry.hpp"
#include "indefla/scaled.hpp"

namespace indefla {

// Both (real) eigenvalues of the symmetrized Theta_m block, magnitude
// descending.  The scaled variant never underflows; the double variant is a
// plain conversion of it.
std::pair<ScaledValue, ScaledValue> theta_eigenvalues_scaled(const AnnularGeometry& g,
                                                             double mu, int m);
std::pair<double, double> theta_eigenvalues(const AnnularGeometry& g, double mu, int m);

// Same for the symmetrized Psi_m block.
std::pair<ScaledValue, ScaledValue> psi_eigenvalues_scaled(const AnnularGeometry& g,
                                                           double mu, int m);
std::pair<double, double> psi_eigenvalues(const AnnularGeometry& g, double mu, int m);

enum class Regime { critical, non_critical };

const char* regime_name(Regime r);

struct ContrastClassification {
    Regime regime = Regime::critical;
    int window_lo = 10;
    int window_hi = 40;

    // critical: least-squares slope of ln |lambda_max(Theta_m)| vs m
    double decay_rate = 0.0;
    double decay_residual = 0.0;

    // non-critical: fitted large-m limits of eig(Psi_m)/m^2 (signed), the
    // larger-magnitude branch first, with the shared fit residual and a
    // check that every sampled eigenvalue carries the sign of (1 - mu)
    double growth_max = 0.0;
    double growth_min = 0.0;
    double growth_residual = 0.0;
    bool sign_consistent = true;
};

struct ClassifyOptions {
    int window_lo = 10;
    int window_hi = 40;
};

// Throws Error(window_too_small) when the window starts below mode 5 or
// holds fewer than 10 modes.
ContrastClassification classify_contrast(const AnnularGeometry& g, double mu,
                                         const ClassifyOptions& opt = {});

}  // namespace indefla
