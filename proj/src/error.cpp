#include "eprsteer/error.hpp"

namespace eprsteer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::NonpositiveWindow: return "NonpositiveWindow";
    case ErrorCode::NonpositiveExtent: return "NonpositiveExtent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonDivisibleFactor: return "NonDivisibleFactor";
    case ErrorCode::TruncationError: return "TruncationError";
    case ErrorCode::DegenerateBootstrap: return "DegenerateBootstrap";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
      return ExitCode::Usage;
    case ErrorCode::NotNormalized:
    case ErrorCode::NegativeProbability:
    case ErrorCode::TruncationError:
    case ErrorCode::DegenerateBootstrap:
      return ExitCode::Numerical;
    default:
      return ExitCode::Data;
  }
}

}  // namespace eprsteer
