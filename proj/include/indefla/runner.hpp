#pragma once

// Batch execution engine shared by the C API and the command-line tool.
//
// Responsibilities: parse the key=value configuration grammar, validate it
// field by field, dispatch exactly one subcommand, and return every output
// (report.json, CSV tables, plot scripts) as an in-memory name -> content
// list.  Nothing here touches the filesystem except write_artifacts, which
// is called once at the end of a run by the front end.
//
// Determinism contract: identical config + overrides produce byte-identical
// artifacts, except for the single generated_at timestamp field inside
// report.json.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indefla/critical.hpp"
#include "indefla/geometry.hpp"

namespace indefla {

struct RunConfig {
    AnnularGeometry geometry;            // r_i, r_e, R
    Contrast contrast;                   // mu, delta
    std::optional<SourceSpec> source;    // keys a, b (both or neither)
    AngularSpectrum spectrum = make_parametric_spectrum(1.0, 0.0, 1.0);
    bool spectrum_is_explicit = false;     // any h_<m> key was given
    bool spectrum_parametric_given = false;  // any spectrum_* key was given

    int m_max = 64;                      // mode truncation for series work
    double margin = 0.01;                // membership dead band around ratio 1
    double tail_tol = 1e-8;              // membership truncation warning level
    std::vector<double> deltas;          // sweep grid; empty = default grid
    int threads = 1;                     // sweep parallelism
    int mode = 1;                        // mode index for field / oracle-compare
    int samples = 257;                   // radial sample count for CSV dumps
    int dtn_modes = 8;                   // dtn emits modes 0..dtn_modes
    int grid_points = 513;               // oracle nodes per region
    int window_lo = 10;                  // classification window
    int window_hi = 40;
    int discard_largest = 2;             // pre-asymptotic deltas dropped from fit

    // every effective key as text, defaults included, for the report echo
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

// Throws Error(parse_error) with line information for grammar problems
// (missing '=', duplicate or unknown keys, unreadable numbers) and
// Error(validation_error) with the offending key for domain violations.
RunConfig parse_config(const std::string& text);

// Applies one "key=value" override on top of a parsed config; same
// validation as the file grammar.  Cross-field checks rerun afterwards.
void apply_override(RunConfig& cfg, const std::string& assignment);

struct RunResult {
    int exit_code = 0;          // 0 success, 1 domain error, 2 usage error
    std::string error_code;     // stable machine code, empty on success
    std::string error_message;  // empty on success
    // name -> content, report.json always present (success or error)
    std::vector<std::pair<std::string, std::string>> artifacts;
};

const std::vector<std::string>& subcommand_names();

// Parse + validate + dispatch.  Never throws: every failure becomes an
// error report.json artifact plus the matching exit code.  `overrides`
// entries are "key=value" strings applied after the config text and after
// the INDEFLA_THREADS environment hint.
RunResult run_subcommand(const std::string& subcommand, const std::string& config_text,
                         const std::vector<std::string>& overrides = {});

// Writes every artifact into dir (created if needed); throws Error(io_error).
void write_artifacts(const RunResult& result, const std::string& dir);

}  // namespace indefla
