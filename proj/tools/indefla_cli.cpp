// Command-line front end.  Parses arguments, reads the configuration file,
// hands everything to the shared library's batch engine, writes the returned
// artifacts in one pass at the end, and maps the engine's exit code to the
// process exit code (0 success, 1 domain error, 2 usage error).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "indefla.h"

namespace {

constexpr int kExitUsage = 2;

// "--key value" and "--key=value" pairs into "key=value" assignments
bool collect_overrides(const std::vector<std::string>& extras, std::vector<std::string>& out,
                       std::string& bad) {
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& token = extras[i];
        if (token.rfind("--", 0) != 0 || token.size() <= 2) {
            bad = "unexpected argument '" + token + "' (overrides look like --key value)";
            return false;
        }
        const std::string body = token.substr(2);
        if (body.find('=') != std::string::npos) {
            out.push_back(body);
            continue;
        }
        if (i + 1 >= extras.size() || extras[i + 1].rfind("--", 0) == 0) {
            bad = "missing value for override '" + token + "'";
            return false;
        }
        out.push_back(body + "=" + extras[++i]);
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Mode-exact solver and diagnostics for the sign-changing transmission "
        "problem on concentric circles"};
    app.allow_extras();

    std::string subcommand;
    std::string config_path;
    std::string out_dir;
    bool show_version = false;

    app.add_flag("--version", show_version, "print the library version and exit");
    app.add_option("subcommand", subcommand,
                   "one of: dtn, field, solve, range-check, sweep-delta, theta-spectrum, "
                   "oracle-compare");
    app.add_option("config", config_path, "key=value configuration file");
    app.add_option("--out", out_dir,
                   "output directory (default: $INDEFLA_OUT, falling back to ./out)");
    app.footer("Any further --key value pair overrides the matching configuration key.\n"
               "See README.md for the configuration grammar and the output schema.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        // CLI11 returns 0 for --help; anything else is a usage problem
        return rc == 0 ? 0 : kExitUsage;
    }

    if (show_version) {
        std::printf("%s\n", indefla_version());
        return 0;
    }
    if (subcommand.empty() || config_path.empty()) {
        std::fprintf(stderr, "usage: indefla <subcommand> <config> [--out DIR] [--key value ...]\n");
        return kExitUsage;
    }

    std::vector<std::string> overrides;
    std::string bad;
    if (!collect_overrides(app.remaining(), overrides, bad)) {
        std::fprintf(stderr, "error: %s\n", bad.c_str());
        return kExitUsage;
    }

    std::ifstream config_file(config_path);
    if (!config_file) {
        std::fprintf(stderr, "error: cannot read config file '%s'\n", config_path.c_str());
        return kExitUsage;
    }
    std::ostringstream config_text;
    config_text << config_file.rdbuf();

    if (out_dir.empty()) {
        const char* env = std::getenv("INDEFLA_OUT");
        out_dir = env && *env ? env : "out";
    }

    std::vector<const char*> override_ptrs;
    override_ptrs.reserve(overrides.size());
    for (const std::string& s : overrides) override_ptrs.push_back(s.c_str());

    indefla_run* run = indefla_run_create(subcommand.c_str(), config_text.str().c_str(),
                                          override_ptrs.data(), override_ptrs.size());
    if (!run) {
        std::fprintf(stderr, "error: out of memory\n");
        return 1;
    }

    const int status = indefla_run_write(run, out_dir.c_str());
    if (status != INDEFLA_OK) {
        std::fprintf(stderr, "error (%s): %s\n", indefla_status_name(status),
                     indefla_last_error());
        indefla_run_free(run);
        return 1;
    }

    const int exit_code = indefla_run_exit_code(run);
    if (exit_code == 0) {
        for (size_t i = 0; i < indefla_run_artifact_count(run); ++i)
            std::printf("wrote %s/%s (%zu bytes)\n", out_dir.c_str(),
                        indefla_run_artifact_name(run, i), indefla_run_artifact_size(run, i));
    } else {
        std::fprintf(stderr, "error (%s): %s\n", indefla_run_error_code(run),
                     indefla_run_error_message(run));
        std::fprintf(stderr, "details in %s/report.json\n", out_dir.c_str());
    }
    indefla_run_free(run);
    return exit_code;
}
