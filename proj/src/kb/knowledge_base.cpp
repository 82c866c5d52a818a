#include "ontomas/kb/knowledge_base.hpp"

#include "ontomas/error.hpp"
#include "ontomas/kb/turtle.hpp"

namespace ontomas::kb {

KnowledgeBase::KnowledgeBase(const OntologySchema& schema)
    : KnowledgeBase(newGraph(schema), schema) {}

KnowledgeBase::KnowledgeBase(Graph graph, const OntologySchema& schema)
    : schema_(schema), graph_(std::move(graph)) {
  for (const Triple& t : schema_.tboxTriples()) {
    tbox_.insert(t);
    graph_.insert(t);
  }
}

KnowledgeBase::WriterTicket::WriterTicket(KnowledgeBase& kb) : kb_(kb) {
  std::unique_lock lock(kb_.ticketMutex_);
  const std::uint64_t mine = kb_.nextTicket_++;
  kb_.ticketCv_.wait(lock, [&] { return kb_.serving_ == mine; });
}

KnowledgeBase::WriterTicket::~WriterTicket() {
  {
    std::lock_guard lock(kb_.ticketMutex_);
    ++kb_.serving_;
  }
  kb_.ticketCv_.notify_all();
}

std::uint64_t KnowledgeBase::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

bool KnowledgeBase::isSchemaTriple(const Triple& t) const { return tbox_.contains(t); }

void KnowledgeBase::guardSchema(const std::vector<Triple>& deletions) const {
  for (const Triple& t : deletions) {
    if (isSchemaTriple(t)) {
      throw Error(ErrorCode::SchemaProtected,
                  "schema triple cannot be removed: " + t.subject.canonical() + " " +
                      t.predicate.canonical() + " " + t.object.canonical());
    }
  }
}

std::string KnowledgeBase::dumpTurtle() const {
  return read([](const Graph& g) { return kb::dumpTurtle(g); });
}

std::size_t KnowledgeBase::size() const {
  return read([](const Graph& g) { return g.size(); });
}

}  // namespace ontomas::kb
