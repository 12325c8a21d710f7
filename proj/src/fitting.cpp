#include "indefla/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "indefla/errors.hpp"

namespace indefla {

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error(ErrorCode::validation_error,
                    "line fit needs at least two matching samples");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) {
        throw Error(ErrorCode::validation_error, "degenerate abscissae in line fit");
    }
    LineFit fit;
    fit.points = static_cast<int>(xs.size());
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;

    double ss = 0.0;
    double ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    fit.residual = std::sqrt(ss / n) / std::max(1.0, ymax - ymin);
    return fit;
}

}  // namespace indefla
