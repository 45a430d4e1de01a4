#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iconn {

/// Error classes. Each maps onto one CLI exit status.
enum class ErrorKind {
    Structure,     // dimensionally inconsistent input
    Domain,        // argument outside its valid range
    Parse,         // malformed file contents
    Data,          // non-finite values in otherwise well-formed data
    Config,        // bad option or unknown name
    Io,            // file could not be opened or written
    Unstable,      // model refused because it is not stable
    Numerical,     // singular or ill-conditioned computation
    Estimation,    // least-squares fit failed
    Verification,  // an identity check exceeded its bound
};

/// Short machine-readable tag, e.g. "E_PARSE".
std::string_view error_tag(ErrorKind kind) noexcept;

/// 2 for parse/config class errors, 3 for numerical ones, 4 for verification.
int exit_status(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace iconn
