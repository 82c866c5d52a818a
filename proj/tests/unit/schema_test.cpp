#include "ontomas/kb/schema.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/kb/vocabulary.hpp"

using namespace ontomas;
using namespace ontomas::kb;

TEST(SchemaTest, NewGraphHoldsOnlyTheTBox) {
  const Graph g = newGraph();
  EXPECT_TRUE(g.contains({ex("Machine"), rdfs::subClassOf(), ex("Resource")}));
  EXPECT_TRUE(g.contains({ex("runsOnResource"), rdfs::domain(), ex("ProcessExecution")}));
  EXPECT_TRUE(g.contains({ex("realPerformance"), rdfs::subPropertyOf(), ex("hasPerformance")}));
  EXPECT_TRUE(aboxTriples(g).empty());
  EXPECT_EQ(g.size(), OntologySchema::manufacturing().tboxTriples().size());
}

TEST(SchemaTest, SubclassFacts) {
  const Graph g = newGraph();
  for (const char* sub : {"Machine", "Robot", "Buffer"}) {
    EXPECT_TRUE(g.contains({ex(sub), rdfs::subClassOf(), ex("Resource")})) << sub;
  }
  for (const char* sub : {"ProcessPlan", "ProcessExecution"}) {
    EXPECT_TRUE(g.contains({ex(sub), rdfs::subClassOf(), ex("Process")})) << sub;
  }
}

TEST(SchemaTest, EveryPropertyHasExactlyOneDomainAndRange) {
  const Graph g = newGraph();
  const auto& schema = OntologySchema::manufacturing();
  std::set<std::string> names;
  for (const auto& p : schema.objectProperties) names.insert(p.name);
  for (const auto& p : schema.datatypeProperties) names.insert(p.name);
  EXPECT_EQ(names.size(), schema.objectProperties.size() + schema.datatypeProperties.size());
  for (const std::string& name : names) {
    EXPECT_EQ(g.match({ex(name), rdfs::domain(), std::nullopt}).size(), 1u) << name;
    EXPECT_EQ(g.match({ex(name), rdfs::range(), std::nullopt}).size(), 1u) << name;
    // domain classes are declared
    const Term domain = g.match({ex(name), rdfs::domain(), std::nullopt}).front().object;
    EXPECT_TRUE(schema.declaresClass(domain)) << name;
  }
}

TEST(KnowledgeBaseTest, SchemaTriplesAreGuarded) {
  KnowledgeBase kb;
  const Triple tboxFact{ex("Machine"), rdfs::subClassOf(), ex("Resource")};
  EXPECT_TRUE(kb.isSchemaTriple(tboxFact));
  try {
    kb.guardSchema({tboxFact});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaProtected);
  }
  EXPECT_NO_THROW(kb.guardSchema({{ex("M1"), rdf::type(), ex("Machine")}}));
}

TEST(KnowledgeBaseTest, RevisionCountsSuccessfulWritesOnly) {
  KnowledgeBase kb;
  EXPECT_EQ(kb.revision(), 0u);
  kb.write([](Graph& g) { g.insert({ex("M1"), rdf::type(), ex("Machine")}); });
  EXPECT_EQ(kb.revision(), 1u);
  EXPECT_THROW(kb.write([](Graph&) -> int { throw Error(ErrorCode::UnknownEntity, "x"); }),
               Error);
  EXPECT_EQ(kb.revision(), 1u);
  EXPECT_EQ(kb.read([](const Graph& g) { return g.size(); }), kb.size());
  EXPECT_EQ(kb.revision(), 1u);
}

// Concurrent writers each see their own revision; together they are 1..N.
TEST(KnowledgeBaseTest, ConcurrentWritesGetDistinctGapFreeRevisions) {
  KnowledgeBase kb;
  constexpr int kThreads = 8;
  constexpr int kWrites = 50;
  std::vector<std::vector<std::uint64_t>> seen(kThreads);
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < kWrites; ++i) {
        kb.write([&](Graph& g) { g.insert({ex("M" + std::to_string(t * kWrites + i)), rdf::type(), ex("Machine")}); });
        seen[t].push_back(KnowledgeBase::lastWriteRevision());
        (void)kb.read([](const Graph& g) { return g.size(); });
      }
    });
  }
  for (auto& th : threads) th.join();
  std::vector<std::uint64_t> all;
  for (const auto& v : seen) {
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    all.insert(all.end(), v.begin(), v.end());
  }
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), static_cast<std::size_t>(kThreads * kWrites));
  for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i + 1);
  EXPECT_EQ(kb.revision(), all.size());
}
