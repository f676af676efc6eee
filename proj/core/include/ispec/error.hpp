#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ispec {

// Stable numeric codes; the CLI reports them verbatim.
enum class ErrorCode : int {
  NonPositiveCoupling = 10,
  DimensionMismatch = 11,
  MalformedDocument = 12,
  WeightOutOfRange = 13,
  NonOrientable = 20,
  BijectionFailure = 21,
  NotSkew = 30,
  OddDimension = 31,
  NearSingular = 32,
  NoSignChange = 40,
  NodeNotFound = 41,
  DualityViolation = 42,
  NonPositiveResidual = 50,
  TooLarge = 60,
  InvalidArgument = 70,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ispec
