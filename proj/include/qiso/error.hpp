#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qiso {

enum class ErrorKind {
  ZeroVector,
  DimensionMismatch,
  NotHermitian,
  DegenerateAtTolerance,
  NonFiniteDerivative,
  IllConditionedSegment,
  WrongDimension,
  PoleDegenerate,
  BadResolution,
  DegenerateSpec,
  OutOfRange,
  AreaExceedsSphere,
  EmptyInput,
  SingularAtDiracPoint,
  NormDrift,
  NotCyclic,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qiso
