#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adfcm {

enum class ErrorCode {
  InvalidArgument,
  InvalidClusterCount,
  DegenerateData,
  EmptyCluster,
  ShapeMismatch,
  UnknownClass,
  LabelsRequired,
  NoDecidedRecords,
  DegenerateGMean,
  ParseError,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures surface as this exception; `code()` tells callers
/// (the CLI in particular) which failure class occurred.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adfcm
