#include "indefla.h"

#include <complex>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "indefla/critical.hpp"
#include "indefla/dtn.hpp"
#include "indefla/errors.hpp"
#include "indefla/geometry.hpp"
#include "indefla/runner.hpp"
#include "indefla/spectral.hpp"

namespace {

thread_local std::string g_last_error;

int status_of(indefla::ErrorCode code) {
    using indefla::ErrorCode;
    switch (code) {
        case ErrorCode::validation_error: return INDEFLA_VALIDATION_ERROR;
        case ErrorCode::parse_error: return INDEFLA_PARSE_ERROR;
        case ErrorCode::singular_mode: return INDEFLA_SINGULAR_MODE;
        case ErrorCode::out_of_interval: return INDEFLA_OUT_OF_INTERVAL;
        case ErrorCode::source_not_in_range: return INDEFLA_SOURCE_NOT_IN_RANGE;
        case ErrorCode::singular_system: return INDEFLA_SINGULAR_SYSTEM;
        case ErrorCode::window_too_small: return INDEFLA_WINDOW_TOO_SMALL;
        case ErrorCode::singular_discrete_system: return INDEFLA_SINGULAR_DISCRETE_SYSTEM;
        case ErrorCode::io_error: return INDEFLA_IO_ERROR;
        case ErrorCode::internal_error: return INDEFLA_INTERNAL_ERROR;
    }
    return INDEFLA_INTERNAL_ERROR;
}

// Runs fn() under the library error contract: catches typed errors, stores
// the message thread-locally, returns a status code.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return INDEFLA_OK;
    } catch (const indefla::Error& err) {
        g_last_error = err.what();
        return status_of(err.code());
    } catch (const std::exception& err) {
        g_last_error = err.what();
        return INDEFLA_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return INDEFLA_INTERNAL_ERROR;
    }
}

int null_argument() {
    g_last_error = "null pointer argument";
    return INDEFLA_NULL_ARGUMENT;
}

}  // namespace

struct indefla_run {
    indefla::RunResult result;
};

extern "C" {

const char* indefla_version(void) { return "1.0.0"; }

const char* indefla_status_name(int status) {
    switch (status) {
        case INDEFLA_OK: return "ok";
        case INDEFLA_VALIDATION_ERROR: return "validation_error";
        case INDEFLA_PARSE_ERROR: return "parse_error";
        case INDEFLA_SINGULAR_MODE: return "singular_mode";
        case INDEFLA_OUT_OF_INTERVAL: return "out_of_interval";
        case INDEFLA_SOURCE_NOT_IN_RANGE: return "source_not_in_range";
        case INDEFLA_SINGULAR_SYSTEM: return "singular_system";
        case INDEFLA_WINDOW_TOO_SMALL: return "window_too_small";
        case INDEFLA_SINGULAR_DISCRETE_SYSTEM: return "singular_discrete_system";
        case INDEFLA_IO_ERROR: return "io_error";
        case INDEFLA_INTERNAL_ERROR: return "internal_error";
        case INDEFLA_NULL_ARGUMENT: return "null_argument";
    }
    return "unknown";
}

const char* indefla_last_error(void) { return g_last_error.c_str(); }

indefla_run* indefla_run_create(const char* subcommand, const char* config_text,
                                const char* const* overrides, size_t n_overrides) {
    try {
        std::vector<std::string> over;
        over.reserve(n_overrides);
        for (size_t i = 0; i < n_overrides; ++i)
            over.emplace_back(overrides && overrides[i] ? overrides[i] : "");
        auto* run = new indefla_run;
        run->result = indefla::run_subcommand(subcommand ? subcommand : "",
                                              config_text ? config_text : "", over);
        return run;
    } catch (const std::bad_alloc&) {
        return nullptr;
    } catch (...) {
        return nullptr;  // run_subcommand itself never throws
    }
}

void indefla_run_free(indefla_run* run) { delete run; }

int indefla_run_exit_code(const indefla_run* run) { return run ? run->result.exit_code : 2; }

const char* indefla_run_error_code(const indefla_run* run) {
    return run ? run->result.error_code.c_str() : "null_argument";
}

const char* indefla_run_error_message(const indefla_run* run) {
    return run ? run->result.error_message.c_str() : "null run handle";
}

size_t indefla_run_artifact_count(const indefla_run* run) {
    return run ? run->result.artifacts.size() : 0;
}

const char* indefla_run_artifact_name(const indefla_run* run, size_t index) {
    if (!run || index >= run->result.artifacts.size()) return nullptr;
    return run->result.artifacts[index].first.c_str();
}

const char* indefla_run_artifact_content(const indefla_run* run, size_t index) {
    if (!run || index >= run->result.artifacts.size()) return nullptr;
    return run->result.artifacts[index].second.c_str();
}

size_t indefla_run_artifact_size(const indefla_run* run, size_t index) {
    if (!run || index >= run->result.artifacts.size()) return 0;
    return run->result.artifacts[index].second.size();
}

int indefla_run_write(const indefla_run* run, const char* dir) {
    if (!run || !dir) return null_argument();
    return guarded([&] { indefla::write_artifacts(run->result, dir); });
}

int indefla_critical_radius(double r_i, double r_e, double r_out, double* out) {
    if (!out) return null_argument();
    return guarded([&] {
        *out = indefla::critical_radius(indefla::make_geometry(r_i, r_e, r_out));
    });
}

int indefla_dtn_entries(double r_i, double r_e, double r_out, double mu, int kind, int m,
                        double entries[4]) {
    if (!entries) return null_argument();
    return guarded([&] {
        const indefla::AnnularGeometry g = indefla::make_geometry(r_i, r_e, r_out);
        indefla::ModeMatrix mat;
        switch (kind) {
            case INDEFLA_DTN_INTERIOR: mat = indefla::interior_dtn_mode(g, m); break;
            case INDEFLA_DTN_EXTERIOR: mat = indefla::exterior_dtn_mode(g, m); break;
            case INDEFLA_DTN_DIFFERENCE: mat = indefla::difference_mode(g, mu, m); break;
            case INDEFLA_DTN_INVERSE_DIFFERENCE:
                mat = indefla::invert_difference_mode(g, mu, m);
                break;
            case INDEFLA_DTN_THETA: mat = indefla::theta_mode(g, mu, m); break;
            case INDEFLA_DTN_PSI: mat = indefla::psi_mode(g, mu, m); break;
            default:
                throw indefla::Error(indefla::ErrorCode::validation_error,
                                     "kind: expected 0..5, got " + std::to_string(kind));
        }
        bool clamped = false;
        entries[0] = mat.e11.to_double_clamped(&clamped);
        entries[1] = mat.e12.to_double_clamped(&clamped);
        entries[2] = mat.e21.to_double_clamped(&clamped);
        entries[3] = mat.e22.to_double_clamped(&clamped);
    });
}

int indefla_neumann_trace(double r_i, double r_e, double r_out, double a, double b, int m,
                          double h_re, double h_im, double* out_re, double* out_im) {
    if (!out_re || !out_im) return null_argument();
    return guarded([&] {
        const indefla::AnnularGeometry g = indefla::make_geometry(r_i, r_e, r_out);
        const indefla::SourceSpec s = indefla::make_source_spec(g, a, b);
        const std::complex<double> t = indefla::neumann_trace_re(g, s, m, {h_re, h_im});
        *out_re = t.real();
        *out_im = t.imag();
    });
}

int indefla_theta_eigenvalues(double r_i, double r_e, double r_out, double mu, int m,
                              double* lambda1, double* lambda2) {
    if (!lambda1 || !lambda2) return null_argument();
    return guarded([&] {
        const indefla::AnnularGeometry g = indefla::make_geometry(r_i, r_e, r_out);
        indefla::make_contrast(mu, 0.0);
        const auto [l1, l2] = indefla::theta_eigenvalues(g, mu, m);
        *lambda1 = l1;
        *lambda2 = l2;
    });
}

int indefla_range_ratio(double r_i, double r_e, double r_out, double a, double b, double c,
                        double q, double s, double* ratio, int* verdict) {
    if (!ratio || !verdict) return null_argument();
    return guarded([&] {
        const indefla::AnnularGeometry g = indefla::make_geometry(r_i, r_e, r_out);
        const indefla::SourceSpec src = indefla::make_source_spec(g, a, b);
        const indefla::AngularSpectrum spec = indefla::make_parametric_spectrum(c, q, s);
        const indefla::MembershipReport report = indefla::range_check(g, src, spec);
        *ratio = report.ratio;
        switch (report.verdict) {
            case indefla::RangeVerdict::in_range: *verdict = INDEFLA_RANGE_IN; break;
            case indefla::RangeVerdict::not_in_range: *verdict = INDEFLA_RANGE_NOT_IN; break;
            case indefla::RangeVerdict::inconclusive:
                *verdict = INDEFLA_RANGE_INCONCLUSIVE;
                break;
        }
    });
}

}  // extern "C"
