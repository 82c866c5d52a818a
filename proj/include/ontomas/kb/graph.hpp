#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ontomas/kb/term.hpp"

namespace ontomas::kb {

/// A triple pattern; nullopt components are wildcards.
struct TriplePattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
};

/// In-memory RDF graph with set semantics.
///
/// Terms are interned; triples are kept in a primary set plus secondary
/// indexes by (s), (p), (o), (s,p) and (p,o). Lookups pick the most selective
/// index for the bound components and filter the rest.
///
/// Not synchronized. KnowledgeBase adds the single-writer/multi-reader lock.
class Graph {
 public:
  /// Returns true when the triple was not present before.
  /// Throws Error(MalformedTriple) for a literal subject or predicate.
  bool insert(const Triple& triple);
  /// Removes one triple; returns whether it was present.
  bool erase(const Triple& triple);
  /// Removes every triple matching the pattern (exact, no inference).
  std::size_t remove(const TriplePattern& pattern);

  [[nodiscard]] bool contains(const Triple& triple) const;
  [[nodiscard]] std::size_t size() const noexcept { return triples_.size(); }
  [[nodiscard]] bool empty() const noexcept { return triples_.empty(); }

  /// Exact matches, sorted by (s, p, o) canonical text.
  [[nodiscard]] std::vector<Triple> match(const TriplePattern& pattern) const;
  /// Like match(), but an rdf:type component also yields the types implied by
  /// rdfs:subClassOf chains (so `?x a ex:Resource` finds machines).
  [[nodiscard]] std::vector<Triple> matchEntailed(const TriplePattern& pattern) const;

  /// Unsorted visitation of exact matches. The callback must not mutate the
  /// graph.
  void forEachMatch(const TriplePattern& pattern,
                    const std::function<void(const Triple&)>& visit) const;
  /// Unsorted, duplicate-free visitation of entailed matches.
  void forEachEntailed(const TriplePattern& pattern,
                       const std::function<void(const Triple&)>& visit) const;

  /// All triples sorted by canonical text.
  [[nodiscard]] std::vector<Triple> triples() const;
  /// Same order as triples(), without copying terms. References stay valid
  /// until the graph is next mutated.
  void forEachSorted(const std::function<void(const Term& s, const Term& p, const Term& o)>& visit) const;

  /// Transitive superclasses of `cls` (excluding `cls`), sorted.
  [[nodiscard]] std::vector<Term> superClassesOf(const Term& cls) const;
  /// Transitive subclasses of `cls` (excluding `cls`), sorted.
  [[nodiscard]] std::vector<Term> subClassesOf(const Term& cls) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  using TermId = std::uint32_t;
  struct IdTriple {
    TermId s;
    TermId p;
    TermId o;
    friend auto operator<=>(const IdTriple&, const IdTriple&) = default;
  };
  using Bucket = std::set<IdTriple>;

  static std::uint64_t pairKey(TermId a, TermId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  TermId intern(const Term& term);
  [[nodiscard]] std::optional<TermId> lookup(const Term& term) const;
  [[nodiscard]] Triple materialize(const IdTriple& t) const;
  void forEachId(std::optional<TermId> s, std::optional<TermId> p,
                 std::optional<TermId> o,
                 const std::function<void(const IdTriple&)>& visit) const;
  std::vector<TermId> closure(TermId start, bool upward) const;
  void eraseId(const IdTriple& t);

  std::vector<Term> terms_;
  std::unordered_map<std::string, TermId> termIds_;

  std::set<IdTriple> triples_;
  std::unordered_map<TermId, Bucket> bySubject_;
  std::unordered_map<TermId, Bucket> byPredicate_;
  std::unordered_map<TermId, Bucket> byObject_;
  std::unordered_map<std::uint64_t, Bucket> bySubjectPredicate_;
  std::unordered_map<std::uint64_t, Bucket> byPredicateObject_;
};

/// Sorts triples by canonical (s, p, o) text.
void sortTriples(std::vector<Triple>& triples);

}  // namespace ontomas::kb
