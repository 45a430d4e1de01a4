#include "iconn/error.hpp"

namespace iconn {

std::string_view error_tag(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Structure: return "E_STRUCTURE";
        case ErrorKind::Domain: return "E_DOMAIN";
        case ErrorKind::Parse: return "E_PARSE";
        case ErrorKind::Data: return "E_DATA";
        case ErrorKind::Config: return "E_CONFIG";
        case ErrorKind::Io: return "E_IO";
        case ErrorKind::Unstable: return "E_UNSTABLE";
        case ErrorKind::Numerical: return "E_NUMERIC";
        case ErrorKind::Estimation: return "E_ESTIMATION";
        case ErrorKind::Verification: return "E_VERIFY";
    }
    return "E_UNKNOWN";
}

int exit_status(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Unstable:
        case ErrorKind::Numerical:
        case ErrorKind::Estimation:
            return 3;
        case ErrorKind::Verification:
            return 4;
        default:
            return 2;
    }
}

}  // namespace iconn
