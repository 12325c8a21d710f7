#include "indefla/geometry.hpp"

#include <cmath>
#include <string>

namespace indefla {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::singular_mode: return "singular_mode";
        case ErrorCode::out_of_interval: return "out_of_interval";
        case ErrorCode::source_not_in_range: return "source_not_in_range";
        case ErrorCode::singular_system: return "singular_system";
        case ErrorCode::window_too_small: return "window_too_small";
        case ErrorCode::singular_discrete_system: return "singular_discrete_system";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::internal_error: return "internal_error";
    }
    return "internal_error";
}

bool is_usage_error(ErrorCode code) {
    return code == ErrorCode::validation_error || code == ErrorCode::parse_error;
}

AnnularGeometry make_geometry(double r_i, double r_e, double R) {
    if (!(std::isfinite(r_i) && std::isfinite(r_e) && std::isfinite(R)))
        throw Error(ErrorCode::validation_error, "geometry radii must be finite");
    if (!(0.0 < r_i && r_i < r_e && r_e < R))
        throw Error(ErrorCode::validation_error,
                    "geometry requires 0 < r_i < r_e < R, got r_i=" + std::to_string(r_i) +
                        " r_e=" + std::to_string(r_e) + " R=" + std::to_string(R));
    return AnnularGeometry{r_i, r_e, R};
}

Contrast make_contrast(double mu, double delta) {
    if (!(std::isfinite(mu) && mu > 0.0))
        throw Error(ErrorCode::validation_error, "contrast mu must be finite and > 0");
    if (!(std::isfinite(delta) && delta >= 0.0))
        throw Error(ErrorCode::validation_error, "regularization delta must be finite and >= 0");
    return Contrast{mu, delta};
}

double critical_radius(const AnnularGeometry& g) { return g.r_e * g.r_e / g.r_i; }

}  // namespace indefla
