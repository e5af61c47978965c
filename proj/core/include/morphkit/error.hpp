#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morphkit {

/// Failure categories shared by every module. The CLI prints the category
/// name verbatim so that callers can parse it.
enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  EmptyTrainingSet,
  RankDeficient,
  IoError,
  FormatError,
  CorruptDictionary,
  SingularProjection,
  ZeroFlow,
  UntrainedModel,
  InsufficientData,
  EmptyRecordSet,
  EmptyScores,
  ZeroImage,
  ImageTooSmall,
  BadBins,
  MissingArtifact,
  ConfigError,
  OracleFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace morphkit
