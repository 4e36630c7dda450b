#include "ptrotor/error.hpp"

namespace ptrotor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::TailNotDecayed: return "TailNotDecayed";
    case ErrorCode::InsufficientCoefficients: return "InsufficientCoefficients";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AllFiltered: return "AllFiltered";
    case ErrorCode::NonMonotoneDetector: return "NonMonotoneDetector";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::SpillExceeded: return "SpillExceeded";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::QuadratureUnresolved: return "QuadratureUnresolved";
    case ErrorCode::WindowOverflow: return "WindowOverflow";
    case ErrorCode::MismatchedParams: return "MismatchedParams";
  }
  return "Unknown";
}

}  // namespace ptrotor
