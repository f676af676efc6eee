#include "ispec/error.hpp"

namespace ispec {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveCoupling: return "NonPositiveCoupling";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::BijectionFailure: return "BijectionFailure";
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NodeNotFound: return "NodeNotFound";
    case ErrorCode::DualityViolation: return "DualityViolation";
    case ErrorCode::NonPositiveResidual: return "NonPositiveResidual";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace ispec
