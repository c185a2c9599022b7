#include "lindyn/error.hpp"

namespace lindyn {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "OK";
    case ErrorCode::NonContracting: return "NON_CONTRACTING";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::KindMismatch: return "KIND_MISMATCH";
    case ErrorCode::NotInvertible: return "NOT_INVERTIBLE";
    case ErrorCode::CircleEigenvalue: return "CIRCLE_EIGENVALUE";
    case ErrorCode::InvalidSplitting: return "INVALID_SPLITTING";
    case ErrorCode::HypothesisFailed: return "HYPOTHESIS_FAILED";
    case ErrorCode::NotCertified: return "NOT_CERTIFIED";
    case ErrorCode::BadFactor: return "BAD_FACTOR";
    case ErrorCode::CannotSeparate: return "CANNOT_SEPARATE";
    case ErrorCode::NotContraction: return "NOT_CONTRACTION";
    case ErrorCode::TrajectoryBudget: return "TRAJECTORY_BUDGET";
    case ErrorCode::NotContractiveSpectrum: return "NOT_CONTRACTIVE_SPECTRUM";
    case ErrorCode::NotHomoclinic: return "NOT_HOMOCLINIC";
    case ErrorCode::NotAChain: return "NOT_A_CHAIN";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace lindyn
