#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krn {

enum class ErrorCode {
  NegativeWeight,
  SumNotOne,
  EmptySupport,
  SpaceMismatch,
  SizeMismatch,
  InvalidPartition,
  NotStochastic,
  NotMeasurePreserving,
  NotIdempotent,
  NotComparable,
  NotAChain,
  NotMonotone,
  TooLarge,
  InvalidFiltration,
  NotAMartingale,
  DimMismatch,
  NotOrthonormal,
  NotLipschitz,
  NotSurjective,
  ParseError,
  ConfigError,
  IOError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::NotMeasurePreserving: return "NotMeasurePreserving";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::NotAChain: return "NotAChain";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidFiltration: return "InvalidFiltration";
    case ErrorCode::NotAMartingale: return "NotAMartingale";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::NotLipschitz: return "NotLipschitz";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace krn
