#include "ontomas/runtime/runtime.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/query/evaluator.hpp"
#include "ontomas/query/resource_history.hpp"
#include "support/plant_kb.hpp"
#include "support/random_patches.hpp"

using namespace ontomas;
using namespace ontomas::runtime;
using kb::Decimal;
using kb::ex;
using test_support::perf;

namespace {

ErrorCode codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::ConfigError;
}

// planned -> running -> successful on `machine` over [start, end).
std::string completed(kb::KnowledgeBase& kb, const std::string& product, const std::string& machine,
                      SimMinute start, SimMinute end, const char* quality = "1") {
  const std::string id = addPlannedExecutionData(kb, product, "P1_" + machine, start, end, machine);
  updateExecutionData(kb, id, {ExecStatus::Running, start, {}, {}, {}, {}});
  updateExecutionData(kb, id, {ExecStatus::Successful, {}, end, {}, perf(static_cast<int>(end - start), "100", quality), {}});
  return id;
}

}  // namespace

TEST(RuntimeTest, AddPlannedExecutionWithResourceIsPlanned) {
  auto kb = test_support::caseStudyKb(7);
  const auto rev = kb->revision();
  const std::string id = addPlannedExecutionData(*kb, "part7", "P1_M2", 100, 118, std::string("M2"));
  EXPECT_EQ(id, "exec000001");
  EXPECT_EQ(kb->revision(), rev + 1) << "one write for create + acknowledge";
  const ProcessExecution e = getExecution(*kb, id);
  EXPECT_EQ(e.status, ExecStatus::Planned);
  EXPECT_EQ(e.product, "part7");
  EXPECT_EQ(e.plan, "P1_M2");
  EXPECT_EQ(e.resource, std::optional<std::string>("M2"));
  EXPECT_EQ(e.plannedEnd - e.plannedStart, 18);
  EXPECT_EQ(addPlannedExecutionData(*kb, "part7", "P1", 100, 100), "exec000002");
  EXPECT_EQ(getExecution(*kb, "exec000002").status, ExecStatus::Proposed);
}

TEST(RuntimeTest, AddPlannedExecutionErrors) {
  auto kb = test_support::caseStudyKb();
  const std::string before = kb->dumpTurtle();
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "ghostPart", "P1", 0, 10); }), ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "part1", "P9", 0, 10); }), ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "part1", "P1", 0, 10, std::string("M9")); }),
            ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "part1", "P1", 10, 5); }), ErrorCode::InvalidWindow);
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "ghost", "P1", 10, 5); }), ErrorCode::UnknownEntity)
      << "unknown entity is reported before the window";
  EXPECT_EQ(codeOf([&] { addPlannedExecutionData(*kb, "bad id", "P1", 0, 1); }), ErrorCode::UnknownEntity);
  EXPECT_EQ(kb->dumpTurtle(), before);
}

TEST(RuntimeTest, LifecycleWritesStatusAndRealPerformance) {
  auto kb = test_support::caseStudyKb();
  const std::string id = addPlannedExecutionData(*kb, "part1", "P1_M3", 2, 17, std::string("M3"));
  ProcessExecution e = updateExecutionData(*kb, id, {ExecStatus::Running, 2, {}, {}, {}, {}});
  EXPECT_EQ(e.status, ExecStatus::Running);
  kb->read([&](const kb::Graph& g) {
    EXPECT_TRUE(g.contains({ex(id), ex("hasStatus"), kb::Term::string("running")}));
    EXPECT_FALSE(g.contains({ex(id), ex("hasStatus"), kb::Term::string("planned")}));
    EXPECT_TRUE(g.contains({ex(id), ex("realStartTime"), kb::Term::dateTime(2)}));
  });
  e = updateExecutionData(*kb, id, {ExecStatus::Successful, {}, 17, {}, perf(15, "120"), {}});
  EXPECT_EQ(e.realPerformance, perf(15, "120"));
  EXPECT_EQ(getExecution(*kb, id), e);
  kb->read([&](const kb::Graph& g) {
    EXPECT_TRUE(g.contains({ex(id), ex("realPerformance"), ex(id + "_real")}));
    EXPECT_TRUE(g.contains({ex(id + "_real"), ex("energyCost"), kb::Term::decimal(120)}));
  });
}

TEST(RuntimeTest, IllegalTransitionsAndMissingFields) {
  auto kb = test_support::caseStudyKb();
  const std::string id = addPlannedExecutionData(*kb, "part1", "P1_M1", 0, 20, std::string("M1"));
  const std::string before = kb->dumpTurtle();
  const auto rev = kb->revision();
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Successful, 0, 20, {}, perf(20, "1"), {}}); }),
            ErrorCode::IllegalTransition);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Proposed, {}, {}, {}, {}, {}}); }),
            ErrorCode::IllegalTransition);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Running, {}, {}, {}, {}, {}}); }),
            ErrorCode::MissingField);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Running, 5, 4, {}, {}, {}}); }),
            ErrorCode::InvalidWindow);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, "exec999999", {ExecStatus::Running, 1, {}, {}, {}, {}}); }),
            ErrorCode::UnknownEntity);
  EXPECT_EQ(kb->dumpTurtle(), before);
  EXPECT_EQ(kb->revision(), rev);

  updateExecutionData(*kb, id, {ExecStatus::Running, 0, {}, {}, {}, {}});
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Successful, {}, 20, {}, {}, {}}); }),
            ErrorCode::MissingField);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Errored, {}, {}, {}, {}, {}}); }),
            ErrorCode::MissingField);
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {ExecStatus::Successful, {}, 20, {}, perf(-1, "1"), {}}); }),
            ErrorCode::DomainViolation);
  updateExecutionData(*kb, id, {ExecStatus::Errored, {}, {}, {}, {}, std::string("spindle jam")});
  EXPECT_EQ(codeOf([&] { updateExecutionData(*kb, id, {{}, {}, 30, {}, {}, {}}); }),
            ErrorCode::IllegalTransition)
      << "terminal executions are frozen";
  EXPECT_EQ(getExecution(*kb, id).errorMessage, std::optional<std::string>("spindle jam"));
}

TEST(RuntimeTest, ProductStatus) {
  auto kb = test_support::caseStudyKb(2);
  ProductStatus fresh = getProductStatus(*kb, "part2");
  EXPECT_EQ(fresh.latestStatus, "no-executions");
  EXPECT_TRUE(fresh.executions.empty());
  EXPECT_EQ(fresh.features, std::vector<std::string>{"F1"});
  EXPECT_EQ(fresh.deadline, std::optional<SimMinute>(60));

  completed(*kb, "part1", "M3", 2, 17);
  const ProductStatus done = getProductStatus(*kb, "part1");
  ASSERT_EQ(done.executions.size(), 1u);
  EXPECT_EQ(done.latestStatus, "successful");
  EXPECT_EQ(done.deadline, std::optional<SimMinute>(60));
  EXPECT_EQ(codeOf([&] { getProductStatus(*kb, "nope"); }), ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { getProductStatus(*kb, "M1"); }), ErrorCode::UnknownEntity);
}

TEST(RuntimeTest, ResourceHistoryKeepsSuccessfulRowsOnly) {
  auto kb = test_support::caseStudyKb(3);
  const std::string a = completed(*kb, "part1", "M1", 30, 50, "0.9");
  const std::string b = completed(*kb, "part2", "M1", 0, 20);
  const std::string c = addPlannedExecutionData(*kb, "part3", "P1_M1", 60, 80, std::string("M1"));
  updateExecutionData(*kb, c, {ExecStatus::Running, 60, {}, {}, {}, {}});
  updateExecutionData(*kb, c, {ExecStatus::Errored, {}, 61, {}, {}, std::string("jam")});

  const auto rows = getResourceHistory(*kb, "M1");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].executionId, b) << "sorted by realStart";
  EXPECT_EQ(rows[1].executionId, a);
  EXPECT_EQ(rows[1].quality, Decimal::fromString("0.9"));
  EXPECT_EQ(rows[1].realStart, 30);
  EXPECT_EQ(rows[1].realEnd, 50);
  EXPECT_EQ(getResourceHistory(*kb, "M1", "errored").size(), 0u)
      << "errored run has no real performance, so the join drops it";
  EXPECT_TRUE(getResourceHistory(*kb, "M2").empty());
  EXPECT_EQ(codeOf([&] { getResourceHistory(*kb, "M9"); }), ErrorCode::UnknownEntity);

  // Same rows as evaluating the shipped query directly.
  const auto table = query::select(*kb, query::resourceHistoryQuery(ex("M1")));
  ASSERT_EQ(table.rows.size(), rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string id = kb::exLocal(table.at(i, "execution"));
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const HistoryRow& r) { return r.executionId == id; });
    ASSERT_NE(it, rows.end());
    EXPECT_EQ(it->energyKwh, *table.at(i, "energyCost").numeric());
  }
}

TEST(RuntimeTest, ChangeResourcePerformance) {
  auto kb = test_support::caseStudyKb();
  EXPECT_EQ(expectedPerformance(*kb, "M1", "P1"), perf(20, "100"));
  EXPECT_EQ(changeResourcePerformance(*kb, "M1", "P1", perf(18, "110.25")), perf(18, "110.25"));
  EXPECT_EQ(expectedPerformance(*kb, "M1", "P1").energyKwh, Decimal::fromString("110.25"));
  EXPECT_EQ(expectedPerformance(*kb, "M1", "P1_M1").durationMin, Decimal(18));
  changeResourcePerformance(*kb, "M3", "P1", perf(16, "114"));
  EXPECT_EQ(expectedPerformance(*kb, "M3", "P1"), perf(16, "114"));
  kb->read([](const kb::Graph& g) {
    EXPECT_EQ(g.match({ex("P1_M1_expected"), ex("energyCost"), std::nullopt}).size(), 1u)
        << "old value removed";
  });

  const std::string before = kb->dumpTurtle();
  EXPECT_EQ(codeOf([&] { changeResourcePerformance(*kb, "M1", "P1", perf(-1, "100")); }),
            ErrorCode::DomainViolation);
  EXPECT_EQ(codeOf([&] { changeResourcePerformance(*kb, "M1", "P1", perf(18, "100", "1.5")); }),
            ErrorCode::DomainViolation);
  EXPECT_EQ(codeOf([&] { changeResourcePerformance(*kb, "R1", "P1", perf(18, "100")); }),
            ErrorCode::UnknownEntity);
  EXPECT_EQ(codeOf([&] { changeResourcePerformance(*kb, "M9", "P1", perf(18, "100")); }),
            ErrorCode::UnknownEntity);
  EXPECT_EQ(kb->dumpTurtle(), before);
}

TEST(RuntimeTest, OeeExamples) {
  // Busy 12 of 25 minutes at planned speed and full quality.
  const OeeReport r = computeOee("M1", 0, 25, {{5, 17, 12, 1.0}});
  EXPECT_DOUBLE_EQ(r.uptime, 0.48);
  EXPECT_DOUBLE_EQ(r.oee, 0.48);

  const OeeReport idle = computeOee("M2", 0, 100, {});
  EXPECT_EQ(idle.uptime, 0.0);
  EXPECT_EQ(idle.perfEfficiency, 1.0);
  EXPECT_EQ(idle.qualityRate, 1.0);

  EXPECT_EQ(codeOf([] { computeOee("M1", 10, 10, {}); }), ErrorCode::EmptyWindow);

  // Hand computation over [0, 100): one execution straddles the end.
  //   busy   = 20 + 18 + 10 = 48              -> uptime 0.48
  //   planned/real = (20 + 15 + 18) / (20 + 18 + 20) = 53/58
  //   quality = (1 + 0.9 + 0.8) / 3 = 0.9
  const OeeReport hand = computeOee("M1", 0, 100, {{0, 20, 20, 1.0}, {40, 58, 15, 0.9}, {90, 110, 18, 0.8}});
  EXPECT_DOUBLE_EQ(hand.uptime, 0.48);
  EXPECT_DOUBLE_EQ(hand.perfEfficiency, 53.0 / 58.0);
  EXPECT_NEAR(hand.qualityRate, 0.9, 1e-12);
  EXPECT_NEAR(hand.oee, 0.48 * (53.0 / 58.0) * 0.9, 1e-12);
  EXPECT_EQ(hand.executions, 3u);
}

TEST(RuntimeTest, OeeFromKnowledgeBase) {
  auto kb = test_support::caseStudyKb(2);
  completed(*kb, "part1", "M1", 5, 17);
  const OeeReport r = computeOee(*kb, "M1", 0, 25);
  EXPECT_DOUBLE_EQ(r.uptime, 0.48);
  EXPECT_DOUBLE_EQ(r.perfEfficiency, 1.0);
  EXPECT_EQ(computeOee(*kb, "M2", 0, 25).uptime, 0.0);
}

// Splitting one execution into two contiguous ones of the same total span
// leaves uptime unchanged.
TEST(RuntimeTest, UptimeInvariantUnderSplitting) {
  std::mt19937_64 rng(3);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int round = 0; round < 2000; ++round) {
    const SimMinute a = pick(0, 50);
    const SimMinute b = a + pick(1, 60);
    const SimMinute s = pick(0, 80);
    const SimMinute e = s + pick(1, 40);
    const SimMinute cut = s + pick(0, static_cast<int>(e - s));
    const double whole = computeOee("M", a, b, {{s, e, e - s, 1.0}}).uptime;
    const double split = computeOee("M", a, b, {{s, cut, cut - s, 1.0}, {cut, e, e - cut, 1.0}}).uptime;
    ASSERT_DOUBLE_EQ(whole, split) << a << " " << b << " " << s << " " << cut << " " << e;
  }
}

// Random patch sequences: status history is always a prefix of the legal
// chain, rejected patches leave the dump untouched, and every stored record
// satisfies its invariants.
TEST(RuntimeTest, StateMachineProperty) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto kb = test_support::caseStudyKb();
    test_support::RandomPatches gen(seed);
    const std::string id = addPlannedExecutionData(*kb, "part1", "P1_M1", 0, 20,
                                                   gen.coin(0.7) ? std::optional<std::string>("M1") : std::nullopt);
    std::vector<ExecStatus> history{getExecution(*kb, id).status};
    for (int step = 0; step < 12; ++step) {
      const std::string before = kb->dumpTurtle();
      try {
        const ProcessExecution e = updateExecutionData(*kb, id, gen.next());
        if (e.status != history.back()) history.push_back(e.status);
      } catch (const Error&) {
        ASSERT_EQ(kb->dumpTurtle(), before);
      }
      const ProcessExecution stored = getExecution(*kb, id);
      ASSERT_EQ(stored.status, history.back());
      ASSERT_FALSE(invariantViolation(stored)) << *invariantViolation(stored);
    }
    for (std::size_t i = 1; i < history.size(); ++i) {
      ASSERT_TRUE(isLegalTransition(history[i - 1], history[i]));
    }
  }
}

TEST(RuntimeTest, RegisterProductRejectsDuplicatesAndUnknownFeatures) {
  auto kb = test_support::caseStudyKb(1);
  EXPECT_EQ(codeOf([&] { registerProduct(*kb, {"part1", {"F1"}, 0, {}}); }), ErrorCode::DomainViolation);
  EXPECT_EQ(codeOf([&] { registerProduct(*kb, {"M1", {"F1"}, 0, {}}); }), ErrorCode::DomainViolation);
  EXPECT_EQ(codeOf([&] { registerProduct(*kb, {"partX", {"F7"}, 0, {}}); }), ErrorCode::UnknownEntity);
}

TEST(RuntimeTest, AgentReadsOfPlansObjectiveAndInstances) {
  auto kb = test_support::caseStudyKb(1);
  const auto candidates = kb->read([](const kb::Graph& g) { return candidatePlans(g, "part1"); });
  ASSERT_EQ(candidates.size(), 4u);
  EXPECT_EQ(candidates[0], (PlanCandidate{"M1", "P1_M1", perf(20, "100")}));
  EXPECT_EQ(candidates[2], (PlanCandidate{"M3", "P1_M3", perf(15, "120")}));
  kb->read([](const kb::Graph& g) {
    EXPECT_EQ(objectiveOf(g, "part1"), (std::vector<builder::Coefficient>{{"completionTime", Decimal(1)}}));
    EXPECT_EQ(instancesOf(g, "Machine"), (std::vector<std::string>{"M1", "M2", "M3", "M4"}));
    EXPECT_EQ(instancesOf(g, "Resource").size(), 9u) << "entailed through subclasses";
    EXPECT_THROW(candidatePlans(g, "M1"), Error);
  });
}
