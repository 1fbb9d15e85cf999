#pragma once

#include <stdexcept>
#include <string>

namespace ksupg {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    TopologyError,
    DegenerateElement,
    DimensionMismatch,
    InvalidState,
    LinearSolverFailure,
    MissingTag,
    SizeLimit,
    BadBracket,
    SingularMatrix,
    NotFound,
    VacuumFormation,
    DetachedShock,
    NoShockDetected,
    IoError,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Every failure mode named by the public API maps to one ErrorCode.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

}  // namespace ksupg
