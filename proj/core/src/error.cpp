#include "morphkit/error.hpp"

namespace morphkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::CorruptDictionary: return "CorruptDictionary";
    case ErrorCode::SingularProjection: return "SingularProjection";
    case ErrorCode::ZeroFlow: return "ZeroFlow";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyRecordSet: return "EmptyRecordSet";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::ZeroImage: return "ZeroImage";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadBins: return "BadBins";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::OracleFailure: return "OracleFailure";
  }
  return "Unknown";
}

}  // namespace morphkit
