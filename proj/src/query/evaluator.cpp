#include "ontomas/query/evaluator.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "ontomas/error.hpp"

namespace ontomas::query {

using kb::Graph;
using kb::Term;
using kb::Triple;

std::vector<Binding> ResultTable::bindings() const {
  std::vector<Binding> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    Binding b;
    for (std::size_t i = 0; i < vars.size(); ++i) b.emplace(vars[i], row[i]);
    out.push_back(std::move(b));
  }
  return out;
}

const Term& ResultTable::at(std::size_t row, std::string_view var) const {
  const auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end()) {
    throw std::out_of_range("no such result variable: " + std::string(var));
  }
  return rows.at(row)[static_cast<std::size_t>(it - vars.begin())];
}

namespace {

bool applyOrdering(std::strong_ordering ord, CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return ord == 0;
    case CompareOp::Ne: return ord != 0;
    case CompareOp::Lt: return ord < 0;
    case CompareOp::Le: return ord <= 0;
    case CompareOp::Gt: return ord > 0;
    case CompareOp::Ge: return ord >= 0;
  }
  return false;
}

}  // namespace

bool compareTerms(const Term& lhs, CompareOp op, const Term& rhs) {
  if (lhs.isIri() || rhs.isIri()) {
    if (!lhs.isIri() || !rhs.isIri()) return false;
    if (op == CompareOp::Eq) return lhs == rhs;
    if (op == CompareOp::Ne) return lhs != rhs;
    return false;
  }
  if (lhs.isNumeric() && rhs.isNumeric()) {
    return applyOrdering(*lhs.numeric() <=> *rhs.numeric(), op);
  }
  if (lhs.datatype() != rhs.datatype()) return false;
  switch (lhs.datatype()) {
    case kb::Datatype::String:
      return applyOrdering(lhs.lexical() <=> rhs.lexical(), op);
    case kb::Datatype::DateTime:
      return applyOrdering(*lhs.dateTime() <=> *rhs.dateTime(), op);
    case kb::Datatype::Boolean:
      return applyOrdering((lhs.lexical() == "true") <=> (rhs.lexical() == "true"), op);
    default:
      return false;
  }
}

namespace {

using Row = std::vector<std::optional<Term>>;

// Backtracking join over the patterns in textual order. Each filter runs at the
// shallowest depth where all of its variables are bound.
class Solver {
 public:
  Solver(const Graph& graph, const std::vector<TriplePattern>& where,
         const std::vector<FilterExpr>& filters)
      : graph_(graph), where_(where), filtersAt_(where.size() + 1) {
    for (const Variable& v : patternVariables(where)) slots_.push_back(v.name);
    std::vector<std::size_t> boundAt(slots_.size(), 0);
    for (std::size_t i = where.size(); i-- > 0;) {
      for (const PatternTerm* pt : {&where[i].subject, &where[i].predicate, &where[i].object}) {
        if (const auto* v = std::get_if<Variable>(pt)) boundAt[slotOf(v->name)] = i + 1;
      }
    }
    for (const FilterExpr& f : filters) {
      std::size_t depth = 0;
      for (const PatternTerm* pt : {&f.lhs, &f.rhs}) {
        if (const auto* v = std::get_if<Variable>(pt)) {
          const std::size_t slot = slotOf(v->name);
          if (slot == slots_.size()) {
            throw Error(ErrorCode::SyntaxError,
                        "FILTER variable ?" + v->name + " does not occur in WHERE");
          }
          depth = std::max(depth, boundAt[slot]);
        }
      }
      filtersAt_[depth].push_back(&f);
    }
  }

  const std::vector<std::string>& slots() const { return slots_; }

  std::size_t slotOf(const std::string& name) const {
    return static_cast<std::size_t>(std::find(slots_.begin(), slots_.end(), name) -
                                    slots_.begin());
  }

  void run(const std::function<void(const Row&)>& emit) {
    Row row(slots_.size());
    emit_ = &emit;
    step(0, row);
  }

 private:
  const Term& valueOf(const PatternTerm& pt, const Row& row) const {
    if (const auto* v = std::get_if<Variable>(&pt)) return *row[slotOf(v->name)];
    return std::get<Term>(pt);
  }

  void step(std::size_t depth, Row& row) {
    for (const FilterExpr* f : filtersAt_[depth]) {
      if (!compareTerms(valueOf(f->lhs, row), f->op, valueOf(f->rhs, row))) return;
    }
    if (depth == where_.size()) {
      (*emit_)(row);
      return;
    }
    const TriplePattern& pattern = where_[depth];
    const std::array<const PatternTerm*, 3> parts = {&pattern.subject, &pattern.predicate,
                                                     &pattern.object};
    std::array<std::optional<std::size_t>, 3> freeSlots;
    std::array<std::optional<Term>, 3> fixed;
    for (std::size_t k = 0; k < 3; ++k) {
      if (const auto* v = std::get_if<Variable>(parts[k])) {
        const std::size_t slot = slotOf(v->name);
        if (row[slot]) {
          fixed[k] = row[slot];
        } else {
          freeSlots[k] = slot;
        }
      } else {
        fixed[k] = std::get<Term>(*parts[k]);
      }
    }
    graph_.forEachEntailed({fixed[0], fixed[1], fixed[2]}, [&](const Triple& t) {
      const std::array<const Term*, 3> values = {&t.subject, &t.predicate, &t.object};
      std::vector<std::size_t> assigned;
      bool consistent = true;
      for (std::size_t k = 0; k < 3 && consistent; ++k) {
        if (!freeSlots[k]) continue;
        auto& cell = row[*freeSlots[k]];
        if (cell) {
          consistent = *cell == *values[k];  // repeated variable within the pattern
        } else {
          cell = *values[k];
          assigned.push_back(*freeSlots[k]);
        }
      }
      if (consistent) step(depth + 1, row);
      for (std::size_t slot : assigned) row[slot].reset();
    });
  }

  const Graph& graph_;
  const std::vector<TriplePattern>& where_;
  std::vector<std::string> slots_;
  std::vector<std::vector<const FilterExpr*>> filtersAt_;
  const std::function<void(const Row&)>* emit_ = nullptr;
};

std::optional<Term> instantiate(const PatternTerm& pt, const Binding& b) {
  if (const auto* v = std::get_if<Variable>(&pt)) {
    const auto it = b.find(v->name);
    if (it == b.end()) return std::nullopt;
    return it->second;
  }
  return std::get<Term>(pt);
}

void requireBoundTemplates(const UpdateQuery& q) {
  const std::vector<Variable> bound = patternVariables(q.where);
  for (const auto* templates : {&q.deletePatterns, &q.insertTemplates}) {
    for (const Variable& v : patternVariables(*templates)) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
        throw Error(ErrorCode::UnboundTemplateVariable,
                    "template variable ?" + v.name + " does not occur in WHERE");
      }
    }
  }
}

}  // namespace

std::vector<Binding> solve(const Graph& graph, const std::vector<TriplePattern>& where,
                           const std::vector<FilterExpr>& filters) {
  Solver solver(graph, where, filters);
  std::vector<Binding> out;
  solver.run([&](const Row& row) {
    Binding b;
    for (std::size_t i = 0; i < row.size(); ++i) b.emplace(solver.slots()[i], *row[i]);
    out.push_back(std::move(b));
  });
  return out;
}

ResultTable evalSelect(const Graph& graph, const SelectQuery& query) {
  Solver solver(graph, query.where, query.filters);
  ResultTable table;
  std::vector<std::size_t> projection;
  for (const Variable& v : query.vars) {
    table.vars.push_back(v.name);
    projection.push_back(solver.slotOf(v.name));
  }
  solver.run([&](const Row& row) {
    std::vector<Term> out;
    out.reserve(projection.size());
    for (std::size_t slot : projection) out.push_back(*row[slot]);
    table.rows.push_back(std::move(out));
  });
  std::sort(table.rows.begin(), table.rows.end());
  if (query.distinct) {
    table.rows.erase(std::unique(table.rows.begin(), table.rows.end()), table.rows.end());
  }
  return table;
}

UpdateStats evalUpdate(Graph& graph, const Query& query, const DeletionGuard& guard) {
  UpdateStats stats;
  if (const auto* data = std::get_if<InsertDataQuery>(&query.body)) {
    if (guard) guard({});
    for (const Triple& t : data->triples) stats.inserted += graph.insert(t) ? 1 : 0;
    return stats;
  }
  const auto* update = std::get_if<UpdateQuery>(&query.body);
  if (update == nullptr) throw Error(ErrorCode::SyntaxError, "SELECT is not an update");
  requireBoundTemplates(*update);

  std::set<Triple> deletions;
  std::set<Triple> insertions;
  for (const Binding& b : solve(graph, update->where, update->filters)) {
    for (const auto& [templates, target] :
         {std::pair{&update->deletePatterns, &deletions},
          std::pair{&update->insertTemplates, &insertions}}) {
      for (const TriplePattern& p : *templates) {
        Triple t{*instantiate(p.subject, b), *instantiate(p.predicate, b),
                 *instantiate(p.object, b)};
        if (kb::isWellFormed(t)) target->insert(std::move(t));
      }
    }
  }
  if (guard) guard({deletions.begin(), deletions.end()});
  for (const Triple& t : deletions) stats.deleted += graph.erase(t) ? 1 : 0;
  for (const Triple& t : insertions) stats.inserted += graph.insert(t) ? 1 : 0;
  return stats;
}

QueryOutcome execute(kb::KnowledgeBase& kb, const Query& query) {
  if (const auto* select = std::get_if<SelectQuery>(&query.body)) {
    return kb.read([&](const Graph& g) { return evalSelect(g, *select); });
  }
  return kb.write([&](Graph& g) {
    return evalUpdate(g, query, [&kb](const std::vector<Triple>& d) { kb.guardSchema(d); });
  });
}

ResultTable select(const kb::KnowledgeBase& kb, std::string_view text) {
  const Query query = parse(text);
  const auto* s = std::get_if<SelectQuery>(&query.body);
  if (s == nullptr) throw Error(ErrorCode::SyntaxError, "expected a SELECT query");
  return kb.read([&](const Graph& g) { return evalSelect(g, *s); });
}

UpdateStats update(kb::KnowledgeBase& kb, std::string_view text) {
  const Query query = parse(text);
  if (query.isSelect()) throw Error(ErrorCode::SyntaxError, "expected an update");
  return std::get<UpdateStats>(execute(kb, query));
}

}  // namespace ontomas::query
