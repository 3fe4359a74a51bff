#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itlrr {

enum class ErrorKind {
    io,          // unreadable/unwritable files
    validation,  // malformed input or violated precondition
    protocol,    // well-formed input the evaluation protocol cannot use
    numerical,   // decomposition failure or non-finite values mid-solve
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Machine-parsable prefix used by the command line ("E_IO", "E_INPUT", ...).
[[nodiscard]] std::string_view error_code(ErrorKind kind) noexcept;

// Process exit code for a failure of the given kind (2, 2, 3, 4).
[[nodiscard]] int exit_code(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace itlrr
