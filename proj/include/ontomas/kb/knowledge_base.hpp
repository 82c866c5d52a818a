#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ontomas/kb/graph.hpp"
#include "ontomas/kb/schema.hpp"

namespace ontomas::kb {

/// The shared knowledge base: a Graph seeded with the TBox, a revision
/// counter, and the single-writer/multi-reader discipline.
///
/// Writers are admitted in ticket (FIFO) order, so concurrent mutations are
/// applied in arrival order and each successful one bumps the revision by
/// exactly one. A writer that throws leaves the revision untouched; callers
/// validate before mutating so a throw never leaves a partial write behind.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(const OntologySchema& schema = OntologySchema::manufacturing());
  /// Adopts `graph` as the full KB content (TBox included, as in a dump).
  KnowledgeBase(Graph graph, const OntologySchema& schema = OntologySchema::manufacturing());

  KnowledgeBase(const KnowledgeBase&) = delete;
  KnowledgeBase& operator=(const KnowledgeBase&) = delete;

  template <typename F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mutex_);
    return std::forward<F>(f)(std::as_const(graph_));
  }

  template <typename F>
  decltype(auto) write(F&& f) {
    WriterTicket ticket(*this);
    std::unique_lock lock(mutex_);
    if constexpr (std::is_void_v<std::invoke_result_t<F, Graph&>>) {
      std::forward<F>(f)(graph_);
      lastWriteRevision_ = ++revision_;
    } else {
      auto result = std::forward<F>(f)(graph_);
      lastWriteRevision_ = ++revision_;
      return result;
    }
  }

  [[nodiscard]] std::uint64_t revision() const;
  /// Revision produced by the calling thread's most recent successful write
  /// to any KB (0 if none). Unlike revision(), another thread's write cannot
  /// slip in between.
  [[nodiscard]] static std::uint64_t lastWriteRevision() noexcept { return lastWriteRevision_; }
  [[nodiscard]] const OntologySchema& schema() const noexcept { return schema_; }
  [[nodiscard]] bool isSchemaTriple(const Triple& t) const;
  /// Throws Error(SchemaProtected) if any triple belongs to the TBox.
  void guardSchema(const std::vector<Triple>& deletions) const;

  [[nodiscard]] std::string dumpTurtle() const;
  [[nodiscard]] std::size_t size() const;

 private:
  class WriterTicket {
   public:
    explicit WriterTicket(KnowledgeBase& kb);
    ~WriterTicket();
    WriterTicket(const WriterTicket&) = delete;
    WriterTicket& operator=(const WriterTicket&) = delete;

   private:
    KnowledgeBase& kb_;
  };

  const OntologySchema& schema_;
  std::set<Triple> tbox_;
  Graph graph_;
  std::uint64_t revision_ = 0;
  static inline thread_local std::uint64_t lastWriteRevision_ = 0;
  mutable std::shared_mutex mutex_;

  std::mutex ticketMutex_;
  std::condition_variable ticketCv_;
  std::uint64_t nextTicket_ = 0;
  std::uint64_t serving_ = 0;
};

}  // namespace ontomas::kb
