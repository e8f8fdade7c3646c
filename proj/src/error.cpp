#include "storychart/error.hpp"

namespace storychart {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::ControlCharacter: return "ControlCharacter";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::SegmentCountTooLarge: return "SegmentCountTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::ConflictingAlias: return "ConflictingAlias";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::TooFewEntities: return "TooFewEntities";
    case ErrorCode::AllColumnsDegenerate: return "AllColumnsDegenerate";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingPrerequisite: return "MissingPrerequisite";
  }
  return "Unknown";
}

bool is_analysis_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ConfigError:
    case ErrorCode::MissingPrerequisite:
    case ErrorCode::InvalidEncoding:
    case ErrorCode::ControlCharacter:
    case ErrorCode::SchemaError:
    case ErrorCode::ParseError:
      return false;
    default:
      return true;
  }
}

}  // namespace storychart
