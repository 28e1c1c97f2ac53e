#include "adfcm/error.hpp"

namespace adfcm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidClusterCount: return "InvalidClusterCount";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::LabelsRequired: return "LabelsRequired";
    case ErrorCode::NoDecidedRecords: return "NoDecidedRecords";
    case ErrorCode::DegenerateGMean: return "DegenerateGMean";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace adfcm
