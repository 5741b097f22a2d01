#pragma once

#include <stdexcept>
#include <string>

namespace survkit {

enum class ErrorCode {
  // dataset validation
  NonFiniteFeature,
  NonPositiveTime,
  LengthMismatch,
  EmptyDataset,
  NoEventsObserved,
  // numerics
  OverflowGuard,
  SingularHessian,
  DimensionMismatch,
  // metrics
  NoComparablePairs,
  NoCasesOrControls,
  ZeroVariance,
  // synthetic
  CalibrationFailed,
  InsufficientStratum,
  // harness
  TooFewSubjects,
  AllCandidatesFailed,
  EmptySweep,
  // io / config
  MissingColumn,
  UnparseableValue,
  AllRowsDropped,
  IoError,
  ConfigError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NoEventsObserved: return "NoEventsObserved";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoComparablePairs: return "NoComparablePairs";
    case ErrorCode::NoCasesOrControls: return "NoCasesOrControls";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::CalibrationFailed: return "CalibrationFailed";
    case ErrorCode::InsufficientStratum: return "InsufficientStratum";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::AllCandidatesFailed: return "AllCandidatesFailed";
    case ErrorCode::EmptySweep: return "EmptySweep";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparseableValue: return "UnparseableValue";
    case ErrorCode::AllRowsDropped: return "AllRowsDropped";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace survkit
