#include "resonant/errors.hpp"

namespace resonant {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIrrationalLadder: return "IrrationalLadder";
    case ErrorCode::kDegreeMismatch: return "DegreeMismatch";
    case ErrorCode::kNotResonant: return "NotResonant";
    case ErrorCode::kMalformedChannel: return "MalformedChannel";
    case ErrorCode::kNonForcing: return "NonForcing";
    case ErrorCode::kNoConsistentG: return "NoConsistentG";
    case ErrorCode::kQuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kStepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::kPNormViolation: return "PNormViolation";
    case ErrorCode::kFitDiverged: return "FitDiverged";
    case ErrorCode::kConstantObservable: return "ConstantObservable";
    case ErrorCode::kNoReturnFound: return "NoReturnFound";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kZeroBreathing: return "ZeroBreathing";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace resonant
