#pragma once

// Least-squares line fit shared by the decay/growth diagnostics.

#include <vector>

namespace indefla {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    // root-mean-square residual divided by max(1, |y range over the fit|):
    // a dimensionless misfit that does not reward trivially steep data.
    double residual = 0.0;
    int points = 0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace indefla
