#include "dpcp/error.hpp"

namespace dpcp {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidObservation:
      return "invalid_observation";
    case ErrorCode::kInvalidParameter:
      return "invalid_parameter";
    case ErrorCode::kInvalidInput:
      return "invalid_input";
    case ErrorCode::kInfiniteSensitivity:
      return "infinite_sensitivity";
    case ErrorCode::kNotReady:
      return "not_ready";
    case ErrorCode::kInsufficientData:
      return "insufficient_data";
    case ErrorCode::kNumericError:
      return "numeric_error";
  }
  return "unknown";
}

}  // namespace dpcp
