#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eprsteer {

enum class ErrorCode {
  ZeroTotal,
  ShapeMismatch,
  InvalidGrid,
  NotNormalized,
  NegativeProbability,
  NonpositiveWindow,
  NonpositiveExtent,
  DimensionMismatch,
  NonDivisibleFactor,
  TruncationError,
  DegenerateBootstrap,
  ParseError,
  NegativeCount,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Process exit codes used by the CLI.
enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, Numerical = 3 };

ExitCode exit_code_for(ErrorCode code);

}  // namespace eprsteer
