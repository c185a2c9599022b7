#pragma once

#include <stdexcept>
#include <string>

namespace lindyn {

// Numeric values are part of the C API and must stay stable.
enum class ErrorCode : int {
  Ok = 0,
  NonContracting = 1,
  NoConvergence = 2,
  KindMismatch = 3,
  NotInvertible = 4,
  CircleEigenvalue = 5,
  InvalidSplitting = 6,
  HypothesisFailed = 7,
  NotCertified = 8,
  BadFactor = 9,
  CannotSeparate = 10,
  NotContraction = 11,
  TrajectoryBudget = 12,
  NotContractiveSpectrum = 13,
  NotHomoclinic = 14,
  NotAChain = 15,
  ConfigInvalid = 16,
  IoError = 17,
  InvalidArgument = 18,
  Internal = 19,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace lindyn
