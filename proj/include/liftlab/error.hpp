#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liftlab {

enum class ErrorKind {
  Parse,
  InvalidArgument,
  ParameterDifferentiation,
  ContainsFiberVariable,
  NonExactEvaluation,
  SpaceMismatch,
  NotProjectable,
  NotInvertible,
  DegreeTooHigh,
  NotClosed,
  LinearlyDependent,
  NotALift,
  NotTransitive,
  NoTransitivePair,
  UnknownId,
  InvalidParameter,
  DegreeTooSmall,
  NotACocycle,
  OutsideRing,
  TruncationExhausted,
  BranchEnumerationFailed,
  LimitExceeded,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can report it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace liftlab
