#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace storychart {

enum class ErrorCode {
  InvalidEncoding,
  ControlCharacter,
  EmptyDocument,
  SegmentCountTooLarge,
  InvalidArgument,
  SchemaError,
  SpanMismatch,
  OutOfBounds,
  ConflictingAlias,
  EmptySelection,
  EmptyGraph,
  TooFewEntities,
  AllColumnsDegenerate,
  ConvergenceFailure,
  DegenerateSeries,
  EmptyTable,
  ParseError,
  IoError,
  ConfigError,
  MissingPrerequisite,
};

std::string_view to_string(ErrorCode code);

// Usage and I/O problems are reported with exit code 2, everything that
// fails inside an analysis step with exit code 3.
bool is_analysis_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace storychart
