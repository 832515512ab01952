#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confmass {

enum class ErrorCode {
  InvalidParameter,
  SelfIntersectingBoundary,
  OriginOutsideDomain,
  MapSolverDiverged,
  DomainTooDistorted,
  PointOutsideDomain,
  NonPositivePotential,
  SingularityMismatch,
  NonFiniteValue,
  NewtonDiverged,
  PositivityLost,
  SingularMatrix,
  NotConverged,
  UnsupportedProblem,
  NotPositiveDefinite,
  ConditionsViolated,
  ConfigError,
  IOError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit status) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace confmass
