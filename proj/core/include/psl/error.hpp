#pragma once

#include <stdexcept>
#include <string>

namespace psl {

// Every failure mode in the toolkit has a stable code so callers (and the
// CLI exit-status mapping) can dispatch without parsing message text.
enum class ErrorCode {
  // file formats
  BadMagic,
  UnknownVersion,
  TruncatedFile,
  TrailingBytes,
  IoError,
  NonFiniteValue,
  DimZero,
  // manifests
  DuplicateId,
  MalformedLine,
  MissingId,
  // wav
  UnsupportedFormat,
  // units files
  NegativeUnit,
  ZeroCount,
  EmptyUnits,
  // quantizer
  TooFewFrames,
  TooFewDistinctPoints,
  DimMismatch,
  // units / metrics
  EmptyReference,
  LengthMismatch,
  SampleRateMismatch,
  SilentReference,
  NoOverlappingIds,
  InvalidUtf8,
  // nn / predictor
  ShapeMismatch,
  TargetOutOfRange,
  AllPad,
  AllMaskedRow,
  SourceTooLong,
  TargetTooLong,
  UnitOutOfRange,
  ShapeMismatchOnLoad,
  EmptyDataset,
  MissingPair,
  // config
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace psl
