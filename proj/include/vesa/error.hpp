#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vesa {

enum class ErrorCode {
  DuplicateNode,
  SchemaViolation,
  MissingEndpoint,
  IllegalEndpointKind,
  MissingNode,
  NodeInUse,
  InvalidNodeId,
  CorruptDump,
  BuildPhaseError,
  ParseError,
  FieldError,
  NetworkError,
  RemoteFormatError,
  EmptyStore,
  InvalidArgument,
  UnknownKeyword,
  UnknownAuthor,
  UnknownDataset,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (HTTP handlers, the CLI) can map it to a status or exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vesa
