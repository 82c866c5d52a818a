#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ontomas/kb/graph.hpp"
#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/query/query.hpp"

namespace ontomas::query {

/// One solution: variable name to bound term.
using Binding = std::map<std::string, kb::Term>;

/// Projected SELECT results. `rows[i][j]` is the value of `vars[j]`. Rows are
/// sorted by their canonical text, so equal inputs give identical tables.
struct ResultTable {
  std::vector<std::string> vars;
  std::vector<std::vector<kb::Term>> rows;

  [[nodiscard]] std::vector<Binding> bindings() const;
  [[nodiscard]] const kb::Term& at(std::size_t row, std::string_view var) const;
};

struct UpdateStats {
  std::size_t deleted = 0;
  std::size_t inserted = 0;
};

/// Filter comparison. Numbers compare by value across integer and decimal,
/// dateTimes by instant, strings by codepoint, booleans false < true; IRIs
/// support only = and !=. Any other pairing is false, `!=` included.
bool compareTerms(const kb::Term& lhs, CompareOp op, const kb::Term& rhs);

/// All solutions of the WHERE block, unprojected and unsorted. rdf:type
/// patterns see rdfs:subClassOf entailment.
std::vector<Binding> solve(const kb::Graph& graph, const std::vector<TriplePattern>& where,
                           const std::vector<FilterExpr>& filters);

ResultTable evalSelect(const kb::Graph& graph, const SelectQuery& query);

/// Called with the ground deletions before anything is mutated; may throw to
/// veto the update.
using DeletionGuard = std::function<void(const std::vector<kb::Triple>&)>;

/// Applies an INSERT DATA or DELETE/INSERT/WHERE update atomically: every
/// template is instantiated against the pre-update graph, then deletions run,
/// then insertions. Instantiations with a literal subject or predicate are
/// skipped. Throws Error(UnboundTemplateVariable) before any mutation when a
/// template variable does not occur in WHERE.
UpdateStats evalUpdate(kb::Graph& graph, const Query& query, const DeletionGuard& guard = {});

using QueryOutcome = std::variant<ResultTable, UpdateStats>;

/// Runs a parsed query against the knowledge base, under a read lock for
/// SELECT and a write lock (with the TBox guard) for updates.
QueryOutcome execute(kb::KnowledgeBase& kb, const Query& query);

ResultTable select(const kb::KnowledgeBase& kb, std::string_view text);
UpdateStats update(kb::KnowledgeBase& kb, std::string_view text);

}  // namespace ontomas::query
