#include "ksupg/error.hpp"

namespace ksupg {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::ParseError: return "parse-error";
        case ErrorCode::TopologyError: return "topology-error";
        case ErrorCode::DegenerateElement: return "degenerate-element";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::InvalidState: return "invalid-state";
        case ErrorCode::LinearSolverFailure: return "linear-solver-failure";
        case ErrorCode::MissingTag: return "missing-tag";
        case ErrorCode::SizeLimit: return "size-limit";
        case ErrorCode::BadBracket: return "bad-bracket";
        case ErrorCode::SingularMatrix: return "singular-matrix";
        case ErrorCode::NotFound: return "not-found";
        case ErrorCode::VacuumFormation: return "vacuum-formation";
        case ErrorCode::DetachedShock: return "detached-shock";
        case ErrorCode::NoShockDetected: return "no-shock-detected";
        case ErrorCode::IoError: return "io-error";
    }
    return "unknown";
}

}  // namespace ksupg
