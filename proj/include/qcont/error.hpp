#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcont {

enum class ErrorKind {
  NonHermitian,
  NumericalFailure,
  DimensionMismatch,
  InvalidDimension,
  RangeError,
  InvalidState,
  SupportViolation,
  ToleranceNotReached,
  PreconditionViolated,
  MarginalMismatch,
  InfeasibleCenter,
  InvalidChannel,
  SaturationFailure,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Compact %.3g rendering for error messages.
inline std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Library-wide exception; `kind()` lets callers dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qcont
