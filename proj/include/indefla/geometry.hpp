#pragma once

// Concentric-circle geometry and material contrast for the sign-changing
// transmission problem on the disk of radius R:
//
//   coefficient  -mu   on the inner disk    B(0, r_i)
//   coefficient   +1   on the annulus       B(r_i, r_e)
//   coefficient  -mu   on the outer annulus B(r_e, R)
//
// with a homogeneous Dirichlet condition on r = R.  All radial problems
// separate over angular modes e^{i m theta}, so everything downstream is
// indexed by an integer mode m and depends on |m| only.

#include "indefla/errors.hpp"

namespace indefla {

struct AnnularGeometry {
    double r_i = 1.0;  // inner interface circle radius
    double r_e = 2.0;  // outer interface circle radius
    double R = 4.0;    // outer boundary radius
};

struct Contrast {
    double mu = 1.0;     // contrast of the negative-coefficient regions, > 0
    double delta = 0.0;  // imaginary regularization, >= 0
};

using ModeIndex = int;

// Throws Error(validation_error) unless 0 < r_i < r_e < R.
AnnularGeometry make_geometry(double r_i, double r_e, double R);

// Throws Error(validation_error) unless mu > 0 and delta >= 0.
Contrast make_contrast(double mu, double delta);

// The critical source radius r_e^2 / r_i: a radial source supported in
// [a, b] with a at or beyond this radius is solvable for every angular
// spectrum at the critical contrast mu = 1.
double critical_radius(const AnnularGeometry& g);

}  // namespace indefla
