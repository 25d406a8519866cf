#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resonant {

enum class ErrorCode {
  kIrrationalLadder,
  kDegreeMismatch,
  kNotResonant,
  kMalformedChannel,
  kNonForcing,
  kNoConsistentG,
  kQuadratureBudgetExceeded,
  kFormatError,
  kStepSizeUnderflow,
  kPNormViolation,
  kFitDiverged,
  kConstantObservable,
  kNoReturnFound,
  kGridMismatch,
  kZeroBreathing,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Domain error carrying a machine-checkable code. The CLI maps every Error to
// exit status 1; usage problems are reported separately.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace resonant
