#pragma once

// Typed errors for the solver library.  Every failure that callers are meant
// to handle carries a stable machine code (also exported through the C API
// and the CLI's JSON error objects) plus a human-readable message.

#include <stdexcept>
#include <string>

namespace indefla {

enum class ErrorCode {
    validation_error,          // bad geometry / contrast / config values
    parse_error,               // unreadable config text
    singular_mode,             // interface-difference matrix not invertible
    out_of_interval,           // radial evaluation outside a piece's interval
    source_not_in_range,       // critical solve requested for an out-of-range source
    singular_system,           // regularized 6x6 system numerically singular
    window_too_small,          // classification window shorter than 10 modes
    singular_discrete_system,  // finite-difference system not solvable
    io_error,                  // artifact write failure
    internal_error
};

const char* error_code_name(ErrorCode code);

// true for errors that indicate bad user input rather than a math condition
// encountered mid-computation; the CLI maps these to exit code 2.
bool is_usage_error(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

  private:
    ErrorCode code_;
};

}  // namespace indefla
