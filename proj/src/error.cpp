#include "gltl/error.hpp"

namespace gltl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kMuRange: return "MuRangeError";
    case ErrorCode::kMissingMu: return "MissingMuError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

ParseError::ParseError(ErrorCode code, std::size_t offset, const std::string& message)
    : Error(code, std::string(to_string(code)) + " at offset " + std::to_string(offset) + ": " +
                      message),
      offset_(offset),
      message_(message) {}

}  // namespace gltl
