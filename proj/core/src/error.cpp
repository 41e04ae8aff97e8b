#include "psl/error.hpp"

namespace psl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DimZero: return "DimZero";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MissingId: return "MissingId";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::NegativeUnit: return "NegativeUnit";
    case ErrorCode::ZeroCount: return "ZeroCount";
    case ErrorCode::EmptyUnits: return "EmptyUnits";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::TooFewDistinctPoints: return "TooFewDistinctPoints";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::SilentReference: return "SilentReference";
    case ErrorCode::NoOverlappingIds: return "NoOverlappingIds";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::AllPad: return "AllPad";
    case ErrorCode::AllMaskedRow: return "AllMaskedRow";
    case ErrorCode::SourceTooLong: return "SourceTooLong";
    case ErrorCode::TargetTooLong: return "TargetTooLong";
    case ErrorCode::UnitOutOfRange: return "UnitOutOfRange";
    case ErrorCode::ShapeMismatchOnLoad: return "ShapeMismatchOnLoad";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace psl
