#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gromp {

enum class ErrorCode {
  AngleNearPi,
  EmptyInput,
  NoConvergence,
  SvdFailure,
  DimOutOfRange,
  DegenerateDataset,
  NoTrials,
  ArmOutOfRange,
  UnknownPreset,
  EmptyDataset,
  InvalidArgument,
  IoFailure,
  ParseFailure,
  ConsistencyFailure,
  InvalidBasis,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. `index()` carries the offending element (pose,
/// step, record or line number) when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AngleNearPi: return "AngleNearPi";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SvdFailure: return "SvdFailure";
    case ErrorCode::DimOutOfRange: return "DimOutOfRange";
    case ErrorCode::DegenerateDataset: return "DegenerateDataset";
    case ErrorCode::NoTrials: return "NoTrials";
    case ErrorCode::ArmOutOfRange: return "ArmOutOfRange";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::InvalidBasis: return "InvalidBasis";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace gromp
