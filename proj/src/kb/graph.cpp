#include "ontomas/kb/graph.hpp"

#include <algorithm>
#include <deque>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::kb {

void sortTriples(std::vector<Triple>& triples) {
  std::sort(triples.begin(), triples.end());
}

Graph::TermId Graph::intern(const Term& term) {
  auto [it, inserted] =
      termIds_.try_emplace(term.canonical(), static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<Graph::TermId> Graph::lookup(const Term& term) const {
  auto it = termIds_.find(term.canonical());
  if (it == termIds_.end()) return std::nullopt;
  return it->second;
}

Triple Graph::materialize(const IdTriple& t) const {
  return Triple{terms_[t.s], terms_[t.p], terms_[t.o]};
}

bool Graph::insert(const Triple& triple) {
  if (!triple.subject.isIri()) {
    throw Error(ErrorCode::MalformedTriple,
                "subject must be an IRI, got " + triple.subject.canonical());
  }
  if (!triple.predicate.isIri()) {
    throw Error(ErrorCode::MalformedTriple,
                "predicate must be an IRI, got " + triple.predicate.canonical());
  }
  const IdTriple t{intern(triple.subject), intern(triple.predicate),
                   intern(triple.object)};
  if (!triples_.insert(t).second) return false;
  bySubject_[t.s].insert(t);
  byPredicate_[t.p].insert(t);
  byObject_[t.o].insert(t);
  bySubjectPredicate_[pairKey(t.s, t.p)].insert(t);
  byPredicateObject_[pairKey(t.p, t.o)].insert(t);
  return true;
}

void Graph::eraseId(const IdTriple& t) {
  triples_.erase(t);
  auto drop = [&t](auto& index, auto key) {
    auto it = index.find(key);
    if (it == index.end()) return;
    it->second.erase(t);
    if (it->second.empty()) index.erase(it);
  };
  drop(bySubject_, t.s);
  drop(byPredicate_, t.p);
  drop(byObject_, t.o);
  drop(bySubjectPredicate_, pairKey(t.s, t.p));
  drop(byPredicateObject_, pairKey(t.p, t.o));
}

bool Graph::erase(const Triple& triple) {
  auto s = lookup(triple.subject);
  auto p = lookup(triple.predicate);
  auto o = lookup(triple.object);
  if (!s || !p || !o) return false;
  const IdTriple t{*s, *p, *o};
  if (!triples_.contains(t)) return false;
  eraseId(t);
  return true;
}

bool Graph::contains(const Triple& triple) const {
  auto s = lookup(triple.subject);
  auto p = lookup(triple.predicate);
  auto o = lookup(triple.object);
  return s && p && o && triples_.contains(IdTriple{*s, *p, *o});
}

void Graph::forEachId(std::optional<TermId> s, std::optional<TermId> p,
                      std::optional<TermId> o,
                      const std::function<void(const IdTriple&)>& visit) const {
  auto scan = [&](const Bucket& bucket) {
    for (const IdTriple& t : bucket) {
      if (s && t.s != *s) continue;
      if (p && t.p != *p) continue;
      if (o && t.o != *o) continue;
      visit(t);
    }
  };
  auto scanIn = [&](const auto& index, auto key) {
    auto it = index.find(key);
    if (it != index.end()) scan(it->second);
  };

  if (s && p && o) {
    const IdTriple t{*s, *p, *o};
    if (triples_.contains(t)) visit(t);
  } else if (s && p) {
    scanIn(bySubjectPredicate_, pairKey(*s, *p));
  } else if (p && o) {
    scanIn(byPredicateObject_, pairKey(*p, *o));
  } else if (s && o) {
    auto bs = bySubject_.find(*s);
    auto bo = byObject_.find(*o);
    if (bs == bySubject_.end() || bo == byObject_.end()) return;
    scan(bs->second.size() <= bo->second.size() ? bs->second : bo->second);
  } else if (s) {
    scanIn(bySubject_, *s);
  } else if (p) {
    scanIn(byPredicate_, *p);
  } else if (o) {
    scanIn(byObject_, *o);
  } else {
    scan(triples_);
  }
}

void Graph::forEachMatch(const TriplePattern& pattern,
                         const std::function<void(const Triple&)>& visit) const {
  std::optional<TermId> ids[3];
  const std::optional<Term>* parts[3] = {&pattern.subject, &pattern.predicate,
                                         &pattern.object};
  for (int i = 0; i < 3; ++i) {
    if (!*parts[i]) continue;
    ids[i] = lookup(**parts[i]);
    if (!ids[i]) return;  // unknown term cannot match anything
  }
  forEachId(ids[0], ids[1], ids[2],
            [&](const IdTriple& t) { visit(materialize(t)); });
}

std::vector<Graph::TermId> Graph::closure(TermId start, bool upward) const {
  std::vector<TermId> result;
  auto sub = lookup(rdfs::subClassOf());
  if (!sub) return result;
  std::set<TermId> seen{start};
  std::deque<TermId> frontier{start};
  while (!frontier.empty()) {
    const TermId current = frontier.front();
    frontier.pop_front();
    auto step = [&](const IdTriple& t) {
      const TermId next = upward ? t.o : t.s;
      if (seen.insert(next).second) {
        result.push_back(next);
        frontier.push_back(next);
      }
    };
    if (upward) {
      forEachId(current, *sub, std::nullopt, step);
    } else {
      forEachId(std::nullopt, *sub, current, step);
    }
  }
  return result;
}

void Graph::forEachEntailed(const TriplePattern& pattern,
                            const std::function<void(const Triple&)>& visit) const {
  const Term& type = rdf::type();
  if (pattern.predicate && *pattern.predicate != type) {
    forEachMatch(pattern, visit);
    return;
  }

  std::optional<TermId> s;
  if (pattern.subject) {
    s = lookup(*pattern.subject);
    if (!s) return;
  }
  std::set<IdTriple> seen;
  auto emit = [&](const IdTriple& t) {
    if (seen.insert(t).second) visit(materialize(t));
  };

  if (!pattern.predicate) {
    std::optional<TermId> o;
    if (pattern.object) {
      o = lookup(*pattern.object);
      if (!o) return;
    }
    forEachId(s, std::nullopt, o, emit);
  }

  const auto typeId = lookup(type);
  if (!typeId) return;

  if (pattern.object) {
    const auto cls = lookup(*pattern.object);
    if (!cls) return;
    std::vector<TermId> members = closure(*cls, /*upward=*/false);
    members.push_back(*cls);
    for (TermId member : members) {
      forEachId(s, *typeId, member, [&](const IdTriple& t) {
        emit(IdTriple{t.s, *typeId, *cls});
      });
    }
  } else {
    std::vector<IdTriple> direct;
    forEachId(s, *typeId, std::nullopt,
              [&](const IdTriple& t) { direct.push_back(t); });
    for (const IdTriple& t : direct) {
      emit(t);
      for (TermId super : closure(t.o, /*upward=*/true)) {
        emit(IdTriple{t.s, *typeId, super});
      }
    }
  }
}

std::vector<Triple> Graph::match(const TriplePattern& pattern) const {
  std::vector<Triple> out;
  forEachMatch(pattern, [&out](const Triple& t) { out.push_back(t); });
  sortTriples(out);
  return out;
}

std::vector<Triple> Graph::matchEntailed(const TriplePattern& pattern) const {
  std::vector<Triple> out;
  forEachEntailed(pattern, [&out](const Triple& t) { out.push_back(t); });
  sortTriples(out);
  return out;
}

std::size_t Graph::remove(const TriplePattern& pattern) {
  std::vector<IdTriple> doomed;
  std::optional<TermId> ids[3];
  const std::optional<Term>* parts[3] = {&pattern.subject, &pattern.predicate,
                                         &pattern.object};
  for (int i = 0; i < 3; ++i) {
    if (!*parts[i]) continue;
    ids[i] = lookup(**parts[i]);
    if (!ids[i]) return 0;
  }
  forEachId(ids[0], ids[1], ids[2],
            [&doomed](const IdTriple& t) { doomed.push_back(t); });
  for (const IdTriple& t : doomed) eraseId(t);
  return doomed.size();
}

std::vector<Triple> Graph::triples() const {
  return match(TriplePattern{});
}

void Graph::forEachSorted(
    const std::function<void(const Term& s, const Term& p, const Term& o)>& visit) const {
  std::vector<const IdTriple*> order;
  order.reserve(triples_.size());
  for (const IdTriple& t : triples_) order.push_back(&t);
  // Lexicographic by canonical text, as Triple's operator<=> orders.
  std::sort(order.begin(), order.end(), [this](const IdTriple* a, const IdTriple* b) {
    if (a->s != b->s) return terms_[a->s] < terms_[b->s];
    if (a->p != b->p) return terms_[a->p] < terms_[b->p];
    return terms_[a->o] < terms_[b->o];
  });
  for (const IdTriple* t : order) visit(terms_[t->s], terms_[t->p], terms_[t->o]);
}

std::vector<Term> Graph::superClassesOf(const Term& cls) const {
  std::vector<Term> out;
  if (auto id = lookup(cls)) {
    for (TermId t : closure(*id, true)) out.push_back(terms_[t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> Graph::subClassesOf(const Term& cls) const {
  std::vector<Term> out;
  if (auto id = lookup(cls)) {
    for (TermId t : closure(*id, false)) out.push_back(terms_[t]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a.triples_) {
    if (!b.contains(a.materialize(t))) return false;
  }
  return true;
}

}  // namespace ontomas::kb
