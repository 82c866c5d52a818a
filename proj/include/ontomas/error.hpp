#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ontomas {

// Every failure the library reports carries one of these codes. The API layer
// maps them 1:1 onto HTTP status codes, the CLI onto exit codes.
enum class ErrorCode {
  MalformedTriple,
  ParseError,
  SyntaxError,
  UnsupportedFeature,
  UnboundTemplateVariable,
  SchemaProtected,
  CsvSyntaxError,
  DanglingReference,
  DomainViolation,
  UnknownEntity,
  InvalidWindow,
  IllegalTransition,
  MissingField,
  EmptyWindow,
  NoCapableResource,
  BudgetInfeasible,
  ConfigError,
};

std::string_view errorCodeName(ErrorCode code);

// Where in a text input an error was found. `file` is empty for inline text;
// `line` 0 means the input as a whole.
struct SourcePosition {
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourcePosition> position = std::nullopt);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] std::string_view codeName() const noexcept {
    return errorCodeName(code_);
  }
  [[nodiscard]] const std::optional<SourcePosition>& position() const noexcept {
    return position_;
  }

 private:
  ErrorCode code_;
  std::optional<SourcePosition> position_;
};

}  // namespace ontomas
