#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ontomas/kb/term.hpp"

namespace ontomas::query {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// A position in a triple pattern: concrete term or variable.
using PatternTerm = std::variant<kb::Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compareOpText(CompareOp op);

/// `lhs op rhs`, where at least one side is normally a variable.
struct FilterExpr {
  PatternTerm lhs;
  CompareOp op;
  PatternTerm rhs;
};

struct SelectQuery {
  std::vector<Variable> vars;
  bool distinct = false;
  std::vector<TriplePattern> where;
  std::vector<FilterExpr> filters;
};

struct InsertDataQuery {
  std::vector<kb::Triple> triples;
};

/// DELETE { ... } INSERT { ... } WHERE { ... }; either template may be empty.
struct UpdateQuery {
  std::vector<TriplePattern> deletePatterns;
  std::vector<TriplePattern> insertTemplates;
  std::vector<TriplePattern> where;
  std::vector<FilterExpr> filters;
};

struct Query {
  std::variant<SelectQuery, InsertDataQuery, UpdateQuery> body;
  std::map<std::string, std::string> prefixes;

  [[nodiscard]] bool isSelect() const { return std::holds_alternative<SelectQuery>(body); }
  [[nodiscard]] bool isUpdate() const { return !isSelect(); }
};

/// Parses the supported subset: PREFIX declarations; SELECT [DISTINCT]
/// (vars | *) [WHERE] { basic graph pattern + FILTER comparisons joined by
/// && }; INSERT DATA { ground triples }; DELETE {..} INSERT {..} WHERE {..}.
/// The ex, rdf, rdfs, owl and xsd prefixes are predeclared and may be
/// redefined.
///
/// Throws Error(SyntaxError) with line/column, or Error(UnsupportedFeature)
/// naming the keyword for SPARQL constructs outside the subset.
Query parse(std::string_view text);

/// Variables occurring in a list of patterns, in first-occurrence order.
std::vector<Variable> patternVariables(const std::vector<TriplePattern>& patterns);

}  // namespace ontomas::query
