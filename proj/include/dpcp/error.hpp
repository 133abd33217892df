#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpcp {

enum class ErrorCode {
  kInvalidObservation,
  kInvalidParameter,
  kInvalidInput,
  kInfiniteSensitivity,
  kNotReady,
  kInsufficientData,
  kNumericError,
};

// Stable machine-readable name, e.g. "infinite_sensitivity".
std::string_view ErrorName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised for a bad data point; carries the 1-based position of the offending
// observation (0 when not tied to a sequence).
class InvalidObservation : public Error {
 public:
  InvalidObservation(std::size_t position, const std::string& message)
      : Error(ErrorCode::kInvalidObservation, message), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace dpcp
