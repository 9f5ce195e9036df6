#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace localmath {

enum class ErrorCode {
  NotInBaseSet,
  DivisionByZero,
  MixedScales,
  InvalidScale,
  Overflow,
  InvalidArgument,
  OutOfDomain,
  NonFiniteIntegrand,
  LeftDomain,
  StepUnstable,
  InvalidEnergy,
  NotNormalized,
  OutOfRange,
  AtSegmentBoundary,
  InvalidBoundaries,
  ConfigInvalid,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace localmath
