#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ontomas/kb/decimal.hpp"
#include "ontomas/kb/sim_time.hpp"

namespace ontomas::kb {

enum class Datatype : std::uint8_t { String, Integer, Decimal, Boolean, DateTime };

std::string_view datatypeIri(Datatype datatype);
std::optional<Datatype> datatypeFromIri(std::string_view iri);

/// An IRI or a typed literal.
///
/// Literal lexical forms are canonicalized on construction ("20.0" and "20"
/// are the same decimal), so comparing canonical text is comparing values.
/// Ordering is by canonical text, which is what every sorted listing uses.
class Term {
 public:
  /// Throws Error(MalformedTriple) for an empty IRI or one containing
  /// whitespace, quotes or angle brackets.
  static Term iri(std::string iri);
  /// Throws Error(MalformedTriple) when `lexical` is not valid for `datatype`.
  static Term literal(std::string lexical, Datatype datatype);

  static Term string(std::string value) {
    return literal(std::move(value), Datatype::String);
  }
  static Term decimal(const Decimal& value);
  static Term integer(std::int64_t value);
  static Term boolean(bool value);
  static Term dateTime(SimMinute minute);

  [[nodiscard]] bool isIri() const noexcept { return iri_; }
  [[nodiscard]] bool isLiteral() const noexcept { return !iri_; }
  /// IRI text, or the literal's canonical lexical form.
  [[nodiscard]] const std::string& lexical() const noexcept { return lexical_; }
  [[nodiscard]] Datatype datatype() const noexcept { return datatype_; }
  /// `<iri>`, `"text"` or `"lexical"^^<datatype-iri>`. Also valid SPARQL.
  [[nodiscard]] const std::string& canonical() const noexcept { return canonical_; }

  [[nodiscard]] bool isNumeric() const noexcept {
    return !iri_ && (datatype_ == Datatype::Integer || datatype_ == Datatype::Decimal);
  }
  /// Value of an integer or decimal literal.
  [[nodiscard]] std::optional<Decimal> numeric() const;
  [[nodiscard]] std::optional<SimMinute> dateTime() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  Term(bool iri, std::string lexical, Datatype datatype);

  bool iri_ = true;
  Datatype datatype_ = Datatype::String;
  std::string lexical_;
  std::string canonical_;
};

/// Backslash-escapes `"`, `\`, newline, carriage return and tab.
std::string escapeString(std::string_view text);

/// A statement. Well-formedness (IRI subject and predicate) is checked when it
/// enters a Graph.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

[[nodiscard]] inline bool isWellFormed(const Triple& t) {
  return t.subject.isIri() && t.predicate.isIri();
}

}  // namespace ontomas::kb
