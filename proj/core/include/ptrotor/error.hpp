#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptrotor {

enum class ErrorCode {
  InvalidParameter,
  TailNotDecayed,
  InsufficientCoefficients,
  EigenFailure,
  ZeroVector,
  AllFiltered,
  NonMonotoneDetector,
  NotCoprime,
  SpillExceeded,
  DegenerateFit,
  QuadratureUnresolved,
  WindowOverflow,
  MismatchedParams,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code identifies the condition;
/// the message carries the numbers that triggered it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ptrotor
