#include "itlrr/error.hpp"

namespace itlrr {

std::string_view error_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::io: return "E_IO";
        case ErrorKind::validation: return "E_INPUT";
        case ErrorKind::protocol: return "E_PROTOCOL";
        case ErrorKind::numerical: return "E_NUMERIC";
    }
    return "E_UNKNOWN";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::io:
        case ErrorKind::validation: return 2;
        case ErrorKind::protocol: return 3;
        case ErrorKind::numerical: return 4;
    }
    return 4;
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace itlrr
