#include "ptdoublet/error.hpp"

namespace ptdoublet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::BranchUndefined: return "BranchUndefined";
    case ErrorCode::ContourTooCloseToSingularity: return "ContourTooCloseToSingularity";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::NoBoundStates: return "NoBoundStates";
    case ErrorCode::DegenerateCubic: return "DegenerateCubic";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::InadmissibleN: return "InadmissibleN";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::WindingNotInteger: return "WindingNotInteger";
    case ErrorCode::TailTooShort: return "TailTooShort";
    case ErrorCode::AsymmetricGrid: return "AsymmetricGrid";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ShiftIsEigenvalue: return "ShiftIsEigenvalue";
    case ErrorCode::DenseCapExceeded: return "DenseCapExceeded";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ptdoublet
