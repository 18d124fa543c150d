#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gltl {

enum class ErrorCode {
  kSyntax,
  kMuRange,
  kMissingMu,
  kIo,
  kSchema,
  kValidation,
  kInvalidGrid,
  kSingularSystem,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the formula parser. offset is a 0-based byte offset into the
// input text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

}  // namespace gltl
