#include "localmath/error.hpp"

namespace localmath {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInBaseSet: return "NotInBaseSet";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedScales: return "MixedScales";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::StepUnstable: return "StepUnstable";
    case ErrorCode::InvalidEnergy: return "InvalidEnergy";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AtSegmentBoundary: return "AtSegmentBoundary";
    case ErrorCode::InvalidBoundaries: return "InvalidBoundaries";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace localmath
