#ifndef TOUCHREPLAY_ERROR_H_
#define TOUCHREPLAY_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace touchreplay {

enum class ErrorCode {
  kMalformedJson,
  kSchemaViolation,
  kBoundsViolation,
  kInvalidScenario,
  kInvalidScript,
  kSlotExhaustion,
  kOverlapConflict,
  kIoError,
  kTransportError,
  kNonZeroExit,
  kEmptyGroundTruth,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

// True for errors caused by bad input files or configuration, as opposed to
// failures while doing the work.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace touchreplay

#endif  // TOUCHREPLAY_ERROR_H_
