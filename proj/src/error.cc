#include "touchreplay/error.h"

namespace touchreplay {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson:
      return "MalformedJson";
    case ErrorCode::kSchemaViolation:
      return "SchemaViolation";
    case ErrorCode::kBoundsViolation:
      return "BoundsViolation";
    case ErrorCode::kInvalidScenario:
      return "InvalidScenario";
    case ErrorCode::kInvalidScript:
      return "InvalidScript";
    case ErrorCode::kSlotExhaustion:
      return "SlotExhaustion";
    case ErrorCode::kOverlapConflict:
      return "OverlapConflict";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kTransportError:
      return "TransportError";
    case ErrorCode::kNonZeroExit:
      return "NonZeroExit";
    case ErrorCode::kEmptyGroundTruth:
      return "EmptyGroundTruth";
    case ErrorCode::kConfigError:
      return "ConfigError";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson:
    case ErrorCode::kSchemaViolation:
    case ErrorCode::kBoundsViolation:
    case ErrorCode::kInvalidScenario:
    case ErrorCode::kInvalidScript:
    case ErrorCode::kEmptyGroundTruth:
    case ErrorCode::kConfigError:
      return true;
    default:
      return false;
  }
}

}  // namespace touchreplay
