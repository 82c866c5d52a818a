#include "ontomas/kb/term.hpp"

#include <cctype>

#include "ontomas/error.hpp"

namespace ontomas::kb {

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

std::string canonicalInteger(std::string_view lexical) {
  auto value = Decimal::parse(lexical);
  if (!value || !value->isInteger() || lexical.find('.') != std::string_view::npos) {
    throw Error(ErrorCode::MalformedTriple,
                "invalid xsd:integer '" + std::string(lexical) + "'");
  }
  return value->toString();
}

std::string canonicalLexical(std::string lexical, Datatype datatype) {
  switch (datatype) {
    case Datatype::String:
      return lexical;
    case Datatype::Integer:
      return canonicalInteger(lexical);
    case Datatype::Decimal: {
      auto value = Decimal::parse(lexical);
      if (!value) {
        throw Error(ErrorCode::MalformedTriple,
                    "invalid xsd:decimal '" + lexical + "'");
      }
      return value->toString();
    }
    case Datatype::Boolean:
      if (lexical == "true" || lexical == "1") return "true";
      if (lexical == "false" || lexical == "0") return "false";
      throw Error(ErrorCode::MalformedTriple, "invalid xsd:boolean '" + lexical + "'");
    case Datatype::DateTime: {
      auto minute = parseDateTime(lexical);
      if (!minute) {
        throw Error(ErrorCode::MalformedTriple,
                    "invalid xsd:dateTime '" + lexical +
                        "' (expected YYYY-MM-DDTHH:MMZ)");
      }
      return formatDateTime(*minute);
    }
  }
  return lexical;
}

}  // namespace

std::string_view datatypeIri(Datatype datatype) {
  switch (datatype) {
    case Datatype::String: return "http://www.w3.org/2001/XMLSchema#string";
    case Datatype::Integer: return "http://www.w3.org/2001/XMLSchema#integer";
    case Datatype::Decimal: return "http://www.w3.org/2001/XMLSchema#decimal";
    case Datatype::Boolean: return "http://www.w3.org/2001/XMLSchema#boolean";
    case Datatype::DateTime: return "http://www.w3.org/2001/XMLSchema#dateTime";
  }
  return {};
}

std::optional<Datatype> datatypeFromIri(std::string_view iri) {
  if (iri.substr(0, kXsd.size()) != kXsd) return std::nullopt;
  const std::string_view local = iri.substr(kXsd.size());
  if (local == "string") return Datatype::String;
  if (local == "integer") return Datatype::Integer;
  if (local == "decimal") return Datatype::Decimal;
  if (local == "boolean") return Datatype::Boolean;
  if (local == "dateTime") return Datatype::DateTime;
  return std::nullopt;
}

std::string escapeString(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Term::Term(bool iri, std::string lexical, Datatype datatype)
    : iri_(iri), datatype_(datatype), lexical_(std::move(lexical)) {
  if (iri_) {
    canonical_ = "<" + lexical_ + ">";
  } else if (datatype_ == Datatype::String) {
    canonical_ = "\"" + escapeString(lexical_) + "\"";
  } else {
    canonical_ = "\"" + lexical_ + "\"^^<" + std::string(datatypeIri(datatype_)) + ">";
  }
}

Term Term::iri(std::string iri) {
  if (iri.empty()) throw Error(ErrorCode::MalformedTriple, "empty IRI");
  for (unsigned char c : iri) {
    if (std::isspace(c) || c == '<' || c == '>' || c == '"' || c < 0x20) {
      throw Error(ErrorCode::MalformedTriple, "invalid character in IRI '" + iri + "'");
    }
  }
  return Term(true, std::move(iri), Datatype::String);
}

Term Term::literal(std::string lexical, Datatype datatype) {
  return Term(false, canonicalLexical(std::move(lexical), datatype), datatype);
}

Term Term::decimal(const Decimal& value) {
  return Term(false, value.toString(), Datatype::Decimal);
}

Term Term::integer(std::int64_t value) {
  return Term(false, std::to_string(value), Datatype::Integer);
}

Term Term::boolean(bool value) {
  return Term(false, value ? "true" : "false", Datatype::Boolean);
}

Term Term::dateTime(SimMinute minute) {
  return Term(false, formatDateTime(minute), Datatype::DateTime);
}

std::optional<Decimal> Term::numeric() const {
  if (!isNumeric()) return std::nullopt;
  return Decimal::parse(lexical_);
}

std::optional<SimMinute> Term::dateTime() const {
  if (iri_ || datatype_ != Datatype::DateTime) return std::nullopt;
  return parseDateTime(lexical_);
}

}  // namespace ontomas::kb
