#pragma once

#include <set>
#include <vector>

#include "ontomas/kb/term.hpp"
#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::test_support {

// Forward-chains `x a C, C subClassOf D => x a D` to a fixpoint by brute force.
inline std::vector<kb::Triple> typeClosure(const std::vector<kb::Triple>& base) {
  std::set<kb::Triple> facts(base.begin(), base.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<kb::Triple> fresh;
    for (const kb::Triple& a : facts) {
      if (a.predicate != kb::rdf::type()) continue;
      for (const kb::Triple& b : facts) {
        if (b.predicate == kb::rdfs::subClassOf() && b.subject == a.object) {
          kb::Triple inferred{a.subject, kb::rdf::type(), b.object};
          if (!facts.contains(inferred)) fresh.push_back(inferred);
        }
      }
    }
    for (auto& t : fresh) changed |= facts.insert(t).second;
  }
  return {facts.begin(), facts.end()};
}

}  // namespace ontomas::test_support
