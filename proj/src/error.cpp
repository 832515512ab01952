#include "confmass/error.hpp"

namespace confmass {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SelfIntersectingBoundary: return "SelfIntersectingBoundary";
    case ErrorCode::OriginOutsideDomain: return "OriginOutsideDomain";
    case ErrorCode::MapSolverDiverged: return "MapSolverDiverged";
    case ErrorCode::DomainTooDistorted: return "DomainTooDistorted";
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::NonPositivePotential: return "NonPositivePotential";
    case ErrorCode::SingularityMismatch: return "SingularityMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::UnsupportedProblem: return "UnsupportedProblem";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ConditionsViolated: return "ConditionsViolated";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace confmass
