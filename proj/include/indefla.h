#ifndef INDEFLA_H
#define INDEFLA_H

/*
 * C interface to the indefinite-Laplacian solver library.
 *
 * Two layers:
 *
 *   1. Batch runs: indefla_run_create executes one subcommand (the same
 *      engine the command-line tool uses) against a configuration document
 *      and returns every output artifact (report.json, CSV tables, plot
 *      scripts) in memory.  indefla_run_write stores them on disk.
 *
 *   2. Direct scalar entry points for embedding: critical radius,
 *      per-mode interface matrices, the Neumann trace of the outer-annulus
 *      Dirichlet solve, interface-operator eigenvalues, and the range
 *      membership ratio.
 *
 * Every fallible call returns an indefla_status; on failure,
 * indefla_last_error() gives a human-readable message for the most recent
 * failing call on the calling thread.  All strings returned through
 * const char* stay owned by the library (or by the run handle) and must
 * not be freed by the caller.
 */

#include <stddef.h>

#if defined(_WIN32)
#define INDEFLA_API __declspec(dllexport)
#else
#define INDEFLA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum indefla_status {
    INDEFLA_OK = 0,
    INDEFLA_VALIDATION_ERROR = 1,
    INDEFLA_PARSE_ERROR = 2,
    INDEFLA_SINGULAR_MODE = 3,
    INDEFLA_OUT_OF_INTERVAL = 4,
    INDEFLA_SOURCE_NOT_IN_RANGE = 5,
    INDEFLA_SINGULAR_SYSTEM = 6,
    INDEFLA_WINDOW_TOO_SMALL = 7,
    INDEFLA_SINGULAR_DISCRETE_SYSTEM = 8,
    INDEFLA_IO_ERROR = 9,
    INDEFLA_INTERNAL_ERROR = 10,
    INDEFLA_NULL_ARGUMENT = 11
} indefla_status;

INDEFLA_API const char* indefla_version(void);

/* stable machine name of a status code, e.g. "validation_error" */
INDEFLA_API const char* indefla_status_name(int status);

/* message of the most recent failing call on this thread ("" if none) */
INDEFLA_API const char* indefla_last_error(void);

/* ------------------------------------------------------------------ */
/* batch runs                                                          */

typedef struct indefla_run indefla_run;

/*
 * Executes one subcommand (dtn, field, solve, range-check, sweep-delta,
 * theta-spectrum, oracle-compare) against a key=value configuration
 * document, with optional "key=value" override strings applied on top.
 * Never fails except on allocation (NULL); computation errors are stored
 * in the handle: inspect indefla_run_exit_code / indefla_run_error_code.
 */
INDEFLA_API indefla_run* indefla_run_create(const char* subcommand, const char* config_text,
                                            const char* const* overrides, size_t n_overrides);
INDEFLA_API void indefla_run_free(indefla_run* run);

/* 0 success, 1 domain error, 2 usage error (same as CLI process exit) */
INDEFLA_API int indefla_run_exit_code(const indefla_run* run);
INDEFLA_API const char* indefla_run_error_code(const indefla_run* run);    /* "" if ok */
INDEFLA_API const char* indefla_run_error_message(const indefla_run* run); /* "" if ok */

INDEFLA_API size_t indefla_run_artifact_count(const indefla_run* run);
INDEFLA_API const char* indefla_run_artifact_name(const indefla_run* run, size_t index);
INDEFLA_API const char* indefla_run_artifact_content(const indefla_run* run, size_t index);
INDEFLA_API size_t indefla_run_artifact_size(const indefla_run* run, size_t index);

/* writes all artifacts into dir (created if missing) */
INDEFLA_API int indefla_run_write(const indefla_run* run, const char* dir);

/* ------------------------------------------------------------------ */
/* direct scalar entry points                                          */

/* r_e^2 / r_i for a valid geometry 0 < r_i < r_e < r_out */
INDEFLA_API int indefla_critical_radius(double r_i, double r_e, double r_out, double* out);

/* matrix kinds for indefla_dtn_entries */
#define INDEFLA_DTN_INTERIOR 0           /* annulus map B_m */
#define INDEFLA_DTN_EXTERIOR 1           /* complement map C_m */
#define INDEFLA_DTN_DIFFERENCE 2         /* D_m = B_m - mu C_m */
#define INDEFLA_DTN_INVERSE_DIFFERENCE 3 /* D_m^{-1} */
#define INDEFLA_DTN_THETA 4              /* interface operator block */
#define INDEFLA_DTN_PSI 5                /* symmetrized square-root block */

/*
 * Per-mode 2x2 interface matrix, row-major [e11 e12 e21 e22].  Magnitudes
 * beyond double range are clamped to the largest finite double.
 */
INDEFLA_API int indefla_dtn_entries(double r_i, double r_e, double r_out, double mu, int kind,
                                    int m, double entries[4]);

/*
 * d/dr at r_e of the mode-m Dirichlet solve of f'' + f'/r - m^2 f/r^2 =
 * h 1_(a,b) on (r_e, r_out) with f(r_e) = f(r_out) = 0.
 */
INDEFLA_API int indefla_neumann_trace(double r_i, double r_e, double r_out, double a, double b,
                                      int m, double h_re, double h_im, double* out_re,
                                      double* out_im);

/* eigenvalues of the mode-m interface operator block, |lambda1| >= |lambda2| */
INDEFLA_API int indefla_theta_eigenvalues(double r_i, double r_e, double r_out, double mu, int m,
                                          double* lambda1, double* lambda2);

/* verdict values returned by indefla_range_ratio */
#define INDEFLA_RANGE_IN 0
#define INDEFLA_RANGE_NOT_IN 1
#define INDEFLA_RANGE_INCONCLUSIVE 2

/*
 * Membership test of the parametric source family h_m = c (1+|m|)^{-q} s^{|m|}
 * supported on (a, b): writes the decisive ratio s^2 (a_star / a)^2, with
 * a_star the critical radius, and the verdict.
 */
INDEFLA_API int indefla_range_ratio(double r_i, double r_e, double r_out, double a, double b,
                                    double c, double q, double s, double* ratio, int* verdict);

#ifdef __cplusplus
}
#endif

#endif /* INDEFLA_H */
