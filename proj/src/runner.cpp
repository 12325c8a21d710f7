#include "indefla/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "indefla/dtn.hpp"
#include "indefla/oracle.hpp"
#include "indefla/regularized.hpp"
#include "indefla/spectral.hpp"

namespace indefla {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// small text helpers

std::string trim(const std::string& s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_complex(std::complex<double> v) {
    if (v.imag() == 0.0) return fmt_g(v.real());
    return fmt_g(v.real()) + "," + fmt_g(v.imag());
}

std::string iso_timestamp_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// value parsers (strict: the whole token must be consumed)

bool parse_double_token(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) return false;
    out = v;
    return true;
}

bool parse_int_token(const std::string& text, long& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

bool parse_complex_token(const std::string& text, std::complex<double>& out) {
    const auto parts = split_commas(trim(text));
    double re = 0.0, im = 0.0;
    if (parts.size() == 1) {
        if (!parse_double_token(parts[0], re)) return false;
    } else if (parts.size() == 2) {
        if (!parse_double_token(parts[0], re) || !parse_double_token(parts[1], im)) return false;
    } else {
        return false;
    }
    out = {re, im};
    return true;
}

// ---------------------------------------------------------------------------
// configuration assembly
//
// All keys are collected into a flat Pending record first; finalize() runs
// the cross-field constructors (geometry ordering, source support, spectrum
// exclusivity) so a later override re-validates everything the same way.

struct Pending {
    double r_i = 1.0, r_e = 2.0, R = 4.0;
    double mu = 1.0, delta = 0.0;
    bool a_given = false, b_given = false;
    double a = 0.0, b = 0.0;
    double spectrum_c = 1.0, spectrum_q = 0.0, spectrum_s = 1.0;
    bool parametric_given = false;
    std::map<int, std::complex<double>> table;
    long m_max = 64;
    double margin = 0.01;
    double tail_tol = 1e-8;
    std::vector<double> deltas;
    long threads = 1;
    long mode = 1;
    long samples = 257;
    long dtn_modes = 8;
    long grid_points = 513;
    long window_lo = 10;
    long window_hi = 40;
    long discard_largest = 2;
};

Pending pending_from(const RunConfig& cfg) {
    Pending p;
    p.r_i = cfg.geometry.r_i;
    p.r_e = cfg.geometry.r_e;
    p.R = cfg.geometry.R;
    p.mu = cfg.contrast.mu;
    p.delta = cfg.contrast.delta;
    if (cfg.source) {
        p.a_given = p.b_given = true;
        p.a = cfg.source->a;
        p.b = cfg.source->b;
    }
    if (cfg.spectrum_is_explicit) {
        p.table = cfg.spectrum.table;
    } else {
        p.spectrum_c = cfg.spectrum.c;
        p.spectrum_q = cfg.spectrum.q;
        p.spectrum_s = cfg.spectrum.s;
    }
    p.parametric_given = cfg.spectrum_parametric_given;
    p.m_max = cfg.m_max;
    p.margin = cfg.margin;
    p.tail_tol = cfg.tail_tol;
    p.deltas = cfg.deltas;
    p.threads = cfg.threads;
    p.mode = cfg.mode;
    p.samples = cfg.samples;
    p.dtn_modes = cfg.dtn_modes;
    p.grid_points = cfg.grid_points;
    p.window_lo = cfg.window_lo;
    p.window_hi = cfg.window_hi;
    p.discard_largest = cfg.discard_largest;
    return p;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& what, int line, std::size_t column) {
    if (line > 0)
        throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ", column " +
                                                std::to_string(column) + ": key '" + key +
                                                "': " + what + ": '" + value + "'");
    throw Error(ErrorCode::validation_error, key + ": " + what + ": '" + value + "'");
}

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::validation_error, key + ": " + what);
}

// Applies one key.  line/column are for parse diagnostics; line 0 means the
// assignment came from a command-line override.
void set_key(Pending& p, const std::string& key, const std::string& value, int line,
             std::size_t column) {
    auto need_double = [&](double lo_excl) {
        double v = 0.0;
        if (!parse_double_token(value, v)) bad_value(key, value, "expected a number", line, column);
        if (!(v > lo_excl)) bad_field(key, "must be > " + fmt_g(lo_excl) + ", got " + fmt_g(v));
        return v;
    };
    auto need_any_double = [&]() {
        double v = 0.0;
        if (!parse_double_token(value, v)) bad_value(key, value, "expected a number", line, column);
        return v;
    };
    auto need_int = [&](long lo, long hi) {
        long v = 0;
        if (!parse_int_token(value, v)) bad_value(key, value, "expected an integer", line, column);
        if (v < lo || v > hi)
            bad_field(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "], got " + std::to_string(v));
        return v;
    };

    if (key == "r_i") p.r_i = need_double(0.0);
    else if (key == "r_e") p.r_e = need_double(0.0);
    else if (key == "R") p.R = need_double(0.0);
    else if (key == "mu") p.mu = need_double(0.0);
    else if (key == "delta") {
        double v = need_any_double();
        if (v < 0.0) bad_field(key, "must be >= 0, got " + fmt_g(v));
        p.delta = v;
    } else if (key == "a") {
        p.a = need_double(0.0);
        p.a_given = true;
    } else if (key == "b") {
        p.b = need_double(0.0);
        p.b_given = true;
    } else if (key == "spectrum_c") {
        p.spectrum_c = need_any_double();
        p.parametric_given = true;
    } else if (key == "spectrum_q") {
        p.spectrum_q = need_any_double();
        p.parametric_given = true;
    } else if (key == "spectrum_s") {
        p.spectrum_s = need_double(0.0);
        p.parametric_given = true;
    } else if (key.rfind("h_", 0) == 0) {
        long m = 0;
        if (!parse_int_token(key.substr(2), m) || m < -100000 || m > 100000)
            bad_value(key, value, "mode suffix must be an integer in [-100000, 100000]", line,
                      column);
        std::complex<double> h;
        if (!parse_complex_token(value, h))
            bad_value(key, value, "expected 're' or 're,im'", line, column);
        p.table[static_cast<int>(m)] = h;
    } else if (key == "m_max") p.m_max = need_int(1, 100000);
    else if (key == "margin") {
        double v = need_any_double();
        if (v < 0.0 || v >= 1.0) bad_field(key, "must lie in [0, 1), got " + fmt_g(v));
        p.margin = v;
    } else if (key == "tail_tol") p.tail_tol = need_double(0.0);
    else if (key == "deltas") {
        std::vector<double> ds;
        for (const auto& part : split_commas(value)) {
            double v = 0.0;
            if (!parse_double_token(part, v) || !(v > 0.0))
                bad_value(key, value, "expected a comma-separated list of positive numbers", line,
                          column);
            ds.push_back(v);
        }
        p.deltas = std::move(ds);
    } else if (key == "threads") p.threads = need_int(1, 1024);
    else if (key == "mode") p.mode = need_int(-100000, 100000);
    else if (key == "samples") p.samples = need_int(2, 10000000);
    else if (key == "dtn_modes") p.dtn_modes = need_int(0, 100000);
    else if (key == "grid_points") p.grid_points = need_int(9, 10000000);
    else if (key == "window_lo") p.window_lo = need_int(0, 100000);
    else if (key == "window_hi") p.window_hi = need_int(0, 100000);
    else if (key == "discard_largest") p.discard_largest = need_int(0, 100);
    else if (line > 0)
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line) + ": unknown key '" + key + "'");
    else
        throw Error(ErrorCode::validation_error, "unknown key '" + key + "'");
}

RunConfig finalize(const Pending& p) {
    RunConfig cfg;
    cfg.geometry = make_geometry(p.r_i, p.r_e, p.R);
    cfg.contrast = make_contrast(p.mu, p.delta);
    if (p.a_given != p.b_given)
        bad_field(p.a_given ? "b" : "a", "the source support needs both endpoints a and b");
    if (p.a_given) cfg.source = make_source_spec(cfg.geometry, p.a, p.b);
    if (!p.table.empty() && p.parametric_given)
        bad_field("spectrum",
                  "give either explicit h_<m> amplitudes or the parametric spectrum_c / "
                  "spectrum_q / spectrum_s family, not both");
    if (!p.table.empty()) {
        cfg.spectrum = make_explicit_spectrum(p.table);
        cfg.spectrum_is_explicit = true;
    } else {
        cfg.spectrum = make_parametric_spectrum(p.spectrum_c, p.spectrum_q, p.spectrum_s);
        cfg.spectrum_is_explicit = false;
    }
    cfg.spectrum_parametric_given = p.parametric_given;
    cfg.m_max = static_cast<int>(p.m_max);
    cfg.margin = p.margin;
    cfg.tail_tol = p.tail_tol;
    cfg.deltas = p.deltas;
    cfg.threads = static_cast<int>(p.threads);
    cfg.mode = static_cast<int>(p.mode);
    cfg.samples = static_cast<int>(p.samples);
    cfg.dtn_modes = static_cast<int>(p.dtn_modes);
    cfg.grid_points = static_cast<int>(p.grid_points);
    cfg.window_lo = static_cast<int>(p.window_lo);
    cfg.window_hi = static_cast<int>(p.window_hi);
    cfg.discard_largest = static_cast<int>(p.discard_largest);
    return cfg;
}

// ---------------------------------------------------------------------------
// report/CSV assembly

json membership_json(const MembershipReport& report) {
    json j;
    j["verdict"] = range_verdict_name(report.verdict);
    j["ratio"] = report.ratio;
    j["critical_radius"] = report.critical_radius;
    j["series_total"] = report.series_total;
    j["tail_estimate"] = report.tail_estimate;
    j["truncation_warning"] = report.truncation_warning;
    json partials = json::array();
    for (const auto& [m, value] : report.partial_sums) partials.push_back({m, value});
    j["partial_sums"] = partials;
    return j;
}

json base_report(const std::string& subcommand, const RunConfig* cfg) {
    json j;
    j["schema_version"] = "1";
    j["subcommand"] = subcommand;
    j["generated_at"] = iso_timestamp_utc();
    if (cfg) {
        json echo;
        for (const auto& [key, value] : cfg->resolved()) echo[key] = value;
        j["config"] = echo;
    }
    return j;
}

void sample_mode_csv(std::string& csv, const ModeSolution& sol, const AnnularGeometry& g,
                     int samples, bool with_mode_column) {
    for (int k = 0; k < samples; ++k) {
        const double r = g.R * static_cast<double>(k) / static_cast<double>(samples - 1);
        const std::complex<double> v = evaluate_mode_solution(sol, r);
        const std::size_t piece = mode_solution_piece_index(sol, r);
        if (with_mode_column) csv += std::to_string(sol.m) + ",";
        csv += fmt_g(r) + "," + fmt_g(v.real()) + "," + fmt_g(v.imag()) + "," +
               std::to_string(piece) + "\n";
    }
}

const char* mode_matrix_kind_name(ModeMatrix::Kind kind) {
    switch (kind) {
        case ModeMatrix::Kind::interior: return "interior";
        case ModeMatrix::Kind::exterior: return "exterior";
        case ModeMatrix::Kind::difference: return "difference";
        case ModeMatrix::Kind::inverse_difference: return "inverse_difference";
        case ModeMatrix::Kind::theta: return "theta";
        case ModeMatrix::Kind::psi: return "psi";
    }
    return "unknown";
}

const SourceSpec& require_source(const RunConfig& cfg) {
    if (!cfg.source)
        bad_field("a", "this subcommand needs the source support keys a and b");
    return *cfg.source;
}

// Mode solution by the solver the contrast selects: regularized for
// delta > 0, critical for (mu = 1, delta = 0).
ModeSolution assemble_mode_solution(const RunConfig& cfg, const SourceSpec& src, int mode,
                                    const char** solver_name) {
    const std::complex<double> h = cfg.spectrum.amplitude(mode);
    if (cfg.contrast.delta > 0.0) {
        *solver_name = "regularized";
        return solve_regularized_mode(cfg.geometry, cfg.contrast, mode, src, h);
    }
    if (cfg.contrast.mu == 1.0) {
        *solver_name = "critical";
        DtnWorkspace ws(cfg.geometry, 1.0);
        return critical_mode_solution(ws, src, mode, h);
    }
    bad_field("delta", "must be positive unless mu = 1 (no solver covers mu != 1 at delta = 0)");
}

// ---------------------------------------------------------------------------
// subcommand bodies (append artifacts; report object passed in)

void run_dtn(const RunConfig& cfg, json& report, RunResult& result) {
    std::string csv = "m,kind,e11,e12,e21,e22,clamped\n";
    const ModeMatrix::Kind kinds[] = {
        ModeMatrix::Kind::interior,       ModeMatrix::Kind::exterior,
        ModeMatrix::Kind::difference,     ModeMatrix::Kind::inverse_difference,
        ModeMatrix::Kind::theta,          ModeMatrix::Kind::psi,
    };
    int rows = 0;
    for (int m = 0; m <= cfg.dtn_modes; ++m) {
        for (ModeMatrix::Kind kind : kinds) {
            ModeMatrix mat;
            switch (kind) {
                case ModeMatrix::Kind::interior: mat = interior_dtn_mode(cfg.geometry, m); break;
                case ModeMatrix::Kind::exterior: mat = exterior_dtn_mode(cfg.geometry, m); break;
                case ModeMatrix::Kind::difference:
                    mat = difference_mode(cfg.geometry, cfg.contrast.mu, m);
                    break;
                case ModeMatrix::Kind::inverse_difference:
                    mat = invert_difference_mode(cfg.geometry, cfg.contrast.mu, m);
                    break;
                case ModeMatrix::Kind::theta: mat = theta_mode(cfg.geometry, cfg.contrast.mu, m); break;
                case ModeMatrix::Kind::psi: mat = psi_mode(cfg.geometry, cfg.contrast.mu, m); break;
            }
            bool clamped = false;
            csv += std::to_string(m);
            csv += ",";
            csv += mode_matrix_kind_name(kind);
            for (const ScaledValue* e : {&mat.e11, &mat.e12, &mat.e21, &mat.e22})
                csv += "," + fmt_g(e->to_double_clamped(&clamped));
            csv += clamped ? ",1\n" : ",0\n";
            ++rows;
        }
    }
    report["dtn"] = {{"modes", cfg.dtn_modes + 1}, {"rows", rows}, {"csv", "dtn.csv"}};
    result.artifacts.emplace_back("dtn.csv", std::move(csv));
}

void run_field(const RunConfig& cfg, json& report, RunResult& result) {
    const SourceSpec& src = require_source(cfg);
    const char* solver = "";
    const ModeSolution sol = assemble_mode_solution(cfg, src, cfg.mode, &solver);
    const H1Norms norms = h1_norms(sol, cfg.geometry);

    std::string csv = "r,re_value,im_value,piece_index\n";
    sample_mode_csv(csv, sol, cfg.geometry, cfg.samples, false);

    const std::complex<double> h = cfg.spectrum.amplitude(cfg.mode);
    report["field"] = {
        {"mode", cfg.mode},
        {"solver", solver},
        {"amplitude", {h.real(), h.imag()}},
        {"h1_norm_sq", {{"disk", norms.disk}, {"annulus", norms.annulus}, {"outer", norms.outer}}},
        {"csv", "field.csv"},
    };
    result.artifacts.emplace_back("field.csv", std::move(csv));
}

void run_solve(const RunConfig& cfg, json& report, RunResult& result) {
    const SourceSpec& src = require_source(cfg);
    if (cfg.contrast.mu != 1.0)
        bad_field("mu", "solve runs at the critical contrast; set mu = 1");
    if (cfg.contrast.delta != 0.0)
        bad_field("delta", "solve is the delta = 0 critical solver; use sweep-delta for delta > 0");

    DtnWorkspace ws(cfg.geometry, 1.0);
    CriticalSolveOptions opt;
    opt.m_max = cfg.m_max;
    const CriticalSolution solution = solve_critical(ws, src, cfg.spectrum, opt);

    std::string csv = "m,r,re_value,im_value,piece_index\n";
    json modes = json::array();
    for (const ModeSolution& sol : solution.modes) {
        sample_mode_csv(csv, sol, cfg.geometry, cfg.samples, true);
        const H1Norms norms = h1_norms(sol, cfg.geometry);
        const std::complex<double> h = cfg.spectrum.amplitude(sol.m);
        const int weight = (!cfg.spectrum_is_explicit && sol.m != 0) ? 2 : 1;
        modes.push_back({
            {"m", sol.m},
            {"amplitude", {h.real(), h.imag()}},
            {"weight", weight},
            {"h1_norm_sq",
             {{"disk", norms.disk}, {"annulus", norms.annulus}, {"outer", norms.outer}}},
        });
    }
    report["membership"] = membership_json(solution.membership);
    report["modes"] = modes;
    report["csv"] = "solution.csv";
    result.artifacts.emplace_back("solution.csv", std::move(csv));
}

void run_range_check(const RunConfig& cfg, json& report, RunResult&) {
    const SourceSpec& src = require_source(cfg);
    RangeCheckOptions opt;
    opt.m_max = cfg.m_max;
    opt.margin = cfg.margin;
    opt.tail_tol = cfg.tail_tol;
    report["membership"] = membership_json(range_check(cfg.geometry, src, cfg.spectrum, opt));
}

void run_sweep_delta(const RunConfig& cfg, json& report, RunResult& result) {
    const SourceSpec& src = require_source(cfg);
    SweepOptions opt;
    opt.m_max = cfg.m_max;
    opt.threads = cfg.threads;
    opt.discard_largest = cfg.discard_largest;
    std::vector<double> deltas = cfg.deltas.empty() ? default_delta_grid() : cfg.deltas;
    const DeltaSweepReport sweep =
        delta_sweep(cfg.geometry, cfg.contrast.mu, src, cfg.spectrum, std::move(deltas), opt);

    std::string csv = "delta,region,h1_norm_sq\n";
    for (const DeltaSweepRow& row : sweep.rows) {
        csv += fmt_g(row.delta) + ",disk," + fmt_g(row.disk_h1_sq) + "\n";
        csv += fmt_g(row.delta) + ",annulus," + fmt_g(row.annulus_h1_sq) + "\n";
        csv += fmt_g(row.delta) + ",outer," + fmt_g(row.outer_h1_sq) + "\n";
    }

    auto trend_json = [](const RegionTrend& t) {
        return json{{"fitted_p", t.fitted_p},
                    {"ratio_last_first", t.ratio_last_first},
                    {"unbounded", t.unbounded}};
    };
    report["sweep"] = {
        {"exponent_p", sweep.exponent_p},
        {"fit_residual", sweep.fit_residual},
        {"fit_points", sweep.fit_points},
        {"rows", sweep.rows.size()},
        {"regions",
         {{"annulus", trend_json(sweep.annulus)},
          {"outer", trend_json(sweep.outer)},
          {"disk", trend_json(sweep.disk)}}},
        {"failed_delta", sweep.failed_delta ? json(*sweep.failed_delta) : json(nullptr)},
        {"csv", "sweep.csv"},
        {"plot", "plot_sweep.gp"},
    };

    const char* script =
        "# log-log squared H1 norms per region against the regularization delta\n"
        "set datafile separator \",\"\n"
        "set logscale xy\n"
        "set xlabel \"delta\"\n"
        "set ylabel \"squared H1 norm\"\n"
        "set key left top\n"
        "plot \"sweep.csv\" using (strcol(2) eq \"disk\"    ? $1 : NaN):3 "
        "with linespoints title \"inner disk\", \\\n"
        "     \"sweep.csv\" using (strcol(2) eq \"annulus\" ? $1 : NaN):3 "
        "with linespoints title \"annulus\", \\\n"
        "     \"sweep.csv\" using (strcol(2) eq \"outer\"   ? $1 : NaN):3 "
        "with linespoints title \"outer annulus\"\n";
    result.artifacts.emplace_back("sweep.csv", std::move(csv));
    result.artifacts.emplace_back("plot_sweep.gp", script);
}

void run_theta_spectrum(const RunConfig& cfg, json& report, RunResult& result) {
    ClassifyOptions opt;
    opt.window_lo = cfg.window_lo;
    opt.window_hi = cfg.window_hi;
    const ContrastClassification cls = classify_contrast(cfg.geometry, cfg.contrast.mu, opt);

    std::string csv = "m,lambda1,lambda2,kind\n";
    for (int m = 0; m <= cfg.window_hi; ++m) {
        const auto [t1, t2] = theta_eigenvalues(cfg.geometry, cfg.contrast.mu, m);
        const auto [p1, p2] = psi_eigenvalues(cfg.geometry, cfg.contrast.mu, m);
        csv += std::to_string(m) + "," + fmt_g(t1) + "," + fmt_g(t2) + ",theta\n";
        csv += std::to_string(m) + "," + fmt_g(p1) + "," + fmt_g(p2) + ",psi\n";
    }

    json cj = {
        {"regime", regime_name(cls.regime)},
        {"window_lo", cls.window_lo},
        {"window_hi", cls.window_hi},
    };
    if (cls.regime == Regime::critical) {
        cj["decay_rate"] = cls.decay_rate;
        cj["decay_residual"] = cls.decay_residual;
    } else {
        cj["growth_max"] = cls.growth_max;
        cj["growth_min"] = cls.growth_min;
        cj["growth_residual"] = cls.growth_residual;
        cj["sign_consistent"] = cls.sign_consistent;
    }
    report["classification"] = cj;
    report["csv"] = "spectrum.csv";
    result.artifacts.emplace_back("spectrum.csv", std::move(csv));
}

void run_oracle_compare(const RunConfig& cfg, json& report, RunResult& result) {
    const SourceSpec& src = require_source(cfg);
    const char* solver = "";
    const ModeSolution exact = assemble_mode_solution(cfg, src, cfg.mode, &solver);
    const std::complex<double> h = cfg.spectrum.amplitude(cfg.mode);

    const RadialGrid grid = make_transmission_grid(cfg.geometry, cfg.contrast, src, cfg.mode, h,
                                                   static_cast<std::size_t>(cfg.grid_points));
    const std::vector<std::complex<double>> oracle = fd_transmission_solve(grid);
    const std::vector<std::complex<double>> sampled =
        sample_on_grid(grid, [&](double r) { return evaluate_mode_solution(exact, r); });

    std::string csv = "r,re_exact,im_exact,re_oracle,im_oracle,abs_error\n";
    double max_abs_error = 0.0, max_abs_exact = 0.0;
    std::size_t idx = 0;
    for (const GridRegion& region : grid.regions) {
        for (std::size_t j = 0; j < region.n; ++j, ++idx) {
            const double r = region.node(j);
            const std::complex<double> e = sampled[idx];
            const std::complex<double> o = oracle[idx];
            const double err = std::abs(e - o);
            max_abs_error = std::max(max_abs_error, err);
            max_abs_exact = std::max(max_abs_exact, std::abs(e));
            csv += fmt_g(r) + "," + fmt_g(e.real()) + "," + fmt_g(e.imag()) + "," +
                   fmt_g(o.real()) + "," + fmt_g(o.imag()) + "," + fmt_g(err) + "\n";
        }
    }

    const FdResidualReport residual = fd_residual(grid, sampled);
    const std::vector<std::size_t> counts = {65, 129, 257, 513};
    const std::vector<double> orders =
        fd_convergence_orders(cfg.geometry, cfg.contrast, src, cfg.mode, h, counts);

    report["compare"] = {
        {"mode", cfg.mode},
        {"solver", solver},
        {"amplitude", {h.real(), h.imag()}},
        {"grid_points", cfg.grid_points},
        {"residual", {{"raw", residual.raw}, {"normalized", residual.normalized}}},
        {"max_abs_error", max_abs_error},
        {"max_abs_exact", max_abs_exact},
        {"convergence", {{"node_counts", counts}, {"orders", orders}}},
        {"csv", "compare.csv"},
    };
    result.artifacts.emplace_back("compare.csv", std::move(csv));
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("r_i", fmt_g(geometry.r_i));
    out.emplace_back("r_e", fmt_g(geometry.r_e));
    out.emplace_back("R", fmt_g(geometry.R));
    out.emplace_back("mu", fmt_g(contrast.mu));
    out.emplace_back("delta", fmt_g(contrast.delta));
    if (source) {
        out.emplace_back("a", fmt_g(source->a));
        out.emplace_back("b", fmt_g(source->b));
    }
    if (spectrum_is_explicit) {
        for (const auto& [m, h] : spectrum.table)
            out.emplace_back("h_" + std::to_string(m), fmt_complex(h));
    } else {
        out.emplace_back("spectrum_c", fmt_g(spectrum.c));
        out.emplace_back("spectrum_q", fmt_g(spectrum.q));
        out.emplace_back("spectrum_s", fmt_g(spectrum.s));
    }
    out.emplace_back("m_max", std::to_string(m_max));
    out.emplace_back("margin", fmt_g(margin));
    out.emplace_back("tail_tol", fmt_g(tail_tol));
    std::string ds;
    for (double d : deltas.empty() ? default_delta_grid() : deltas) {
        if (!ds.empty()) ds += ",";
        ds += fmt_g(d);
    }
    out.emplace_back("deltas", ds);
    out.emplace_back("threads", std::to_string(threads));
    out.emplace_back("mode", std::to_string(mode));
    out.emplace_back("samples", std::to_string(samples));
    out.emplace_back("dtn_modes", std::to_string(dtn_modes));
    out.emplace_back("grid_points", std::to_string(grid_points));
    out.emplace_back("window_lo", std::to_string(window_lo));
    out.emplace_back("window_hi", std::to_string(window_hi));
    out.emplace_back("discard_largest", std::to_string(discard_largest));
    return out;
}

RunConfig parse_config(const std::string& text) {
    Pending pending;
    std::map<std::string, int> first_line;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;

        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        if (trim(line).empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(line_no) + ", column " +
                            std::to_string(line.size() + 1) +
                            ": expected 'key = value', found no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(line_no) + ", column 1: empty key");

        auto [it, inserted] = first_line.emplace(key, line_no);
        if (!inserted)
            throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) +
                                                    ": duplicate key '" + key +
                                                    "' (first on line " +
                                                    std::to_string(it->second) + ")");
        set_key(pending, key, value, line_no, eq + 2);
    }
    return finalize(pending);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorCode::validation_error,
                    "override '" + assignment + "' is not of the form key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty())
        throw Error(ErrorCode::validation_error,
                    "override '" + assignment + "' has an empty key");
    Pending pending = pending_from(cfg);
    set_key(pending, key, value, 0, 0);
    cfg = finalize(pending);
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {
        "dtn", "field", "solve", "range-check", "sweep-delta", "theta-spectrum",
        "oracle-compare"};
    return names;
}

RunResult run_subcommand(const std::string& subcommand, const std::string& config_text,
                         const std::vector<std::string>& overrides) {
    RunResult result;
    bool have_cfg = false;
    RunConfig cfg;
    try {
        bool known = false;
        for (const std::string& name : subcommand_names()) known = known || name == subcommand;
        if (!known) {
            std::string names;
            for (const std::string& name : subcommand_names())
                names += (names.empty() ? "" : ", ") + name;
            throw Error(ErrorCode::validation_error,
                        "unknown subcommand '" + subcommand + "'; expected one of: " + names);
        }

        cfg = parse_config(config_text);
        if (const char* env = std::getenv("INDEFLA_THREADS")) {
            long v = 0;
            if (!parse_int_token(env, v) || v < 1 || v > 1024)
                throw Error(ErrorCode::validation_error,
                            std::string("INDEFLA_THREADS: expected an integer in [1, 1024], "
                                        "got '") + env + "'");
            cfg.threads = static_cast<int>(v);
        }
        for (const std::string& assignment : overrides) apply_override(cfg, assignment);
        have_cfg = true;

        json report = base_report(subcommand, &cfg);
        if (subcommand == "dtn") run_dtn(cfg, report, result);
        else if (subcommand == "field") run_field(cfg, report, result);
        else if (subcommand == "solve") run_solve(cfg, report, result);
        else if (subcommand == "range-check") run_range_check(cfg, report, result);
        else if (subcommand == "sweep-delta") run_sweep_delta(cfg, report, result);
        else if (subcommand == "theta-spectrum") run_theta_spectrum(cfg, report, result);
        else run_oracle_compare(cfg, report, result);

        result.artifacts.emplace_back("report.json", report.dump(2) + "\n");
        // report.json first, data files after, in a fixed order
        std::rotate(result.artifacts.begin(), result.artifacts.end() - 1,
                    result.artifacts.end());
        return result;
    } catch (const Error& err) {
        result.exit_code = is_usage_error(err.code()) ? 2 : 1;
        result.error_code = err.code_name();
        result.error_message = err.what();
    } catch (const std::exception& err) {
        result.exit_code = 1;
        result.error_code = error_code_name(ErrorCode::internal_error);
        result.error_message = err.what();
    }
    json report = base_report(subcommand, have_cfg ? &cfg : nullptr);
    report["error"] = {{"code", result.error_code}, {"message", result.error_message}};
    result.artifacts.clear();
    result.artifacts.emplace_back("report.json", report.dump(2) + "\n");
    return result;
}

void write_artifacts(const RunResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create '" + dir + "': " + ec.message());
    for (const auto& [name, content] : result.artifacts) {
        const fs::path path = fs::path(dir) / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
    }
}

}  // namespace indefla
