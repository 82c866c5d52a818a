#include "ontomas/error.hpp"

#include <fmt/format.h>

namespace ontomas {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedTriple: return "MalformedTriple";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::UnboundTemplateVariable: return "UnboundTemplateVariable";
    case ErrorCode::SchemaProtected: return "SchemaProtected";
    case ErrorCode::CsvSyntaxError: return "CsvSyntaxError";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NoCapableResource: return "NoCapableResource";
    case ErrorCode::BudgetInfeasible: return "BudgetInfeasible";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string decorate(const std::string& message,
                     const std::optional<SourcePosition>& position) {
  if (!position) return message;
  if (position->line == 0) {
    return position->file.empty() ? message : fmt::format("{}: {}", position->file, message);
  }
  if (position->file.empty() && position->column == 0) {
    return fmt::format("{}: {}", position->line, message);
  }
  if (position->file.empty()) {
    return fmt::format("{}:{}: {}", position->line, position->column, message);
  }
  if (position->column == 0) {
    return fmt::format("{}:{}: {}", position->file, position->line, message);
  }
  return fmt::format("{}:{}:{}: {}", position->file, position->line,
                     position->column, message);
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<SourcePosition> position)
    : std::runtime_error(decorate(message, position)),
      code_(code),
      position_(std::move(position)) {}

}  // namespace ontomas
