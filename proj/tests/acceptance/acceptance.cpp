// Acceptance checks. Prints one PASS/FAIL line per criterion with its
// measured time and limit; exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ontomas/api/service.hpp"
#include "ontomas/builder/plant.hpp"
#include "ontomas/error.hpp"
#include "ontomas/kb/turtle.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/query/evaluator.hpp"
#include "ontomas/query/resource_history.hpp"
#include "ontomas/runtime/runtime.hpp"
#include "ontomas/sim/engine.hpp"
#include "ontomas/sim/policy.hpp"
#include "support/api_client.hpp"
#include "support/plant_kb.hpp"
#include "support/random_patches.hpp"
#include "support/random_query.hpp"
#include "support/type_closure.hpp"

using namespace ontomas;
using kb::Decimal;
using json = nlohmann::json;

namespace {

// A failed check carries its explanation.
struct Failure {
  std::string what;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

Decimal dec(const char* text) { return Decimal::fromString(text); }

const char* kMachines[] = {"M1", "M2", "M3", "M4"};

// ---- 1 ----------------------------------------------------------------------

void expectedPerformances() {
  kb::KnowledgeBase kb;
  const auto plant = builder::loadCsvDirectory(test_support::fixturePath("case_study"));
  kb.write([&](kb::Graph& g) { builder::buildAbox(g, plant); });
  const std::pair<int, int> expected[] = {{20, 100}, {18, 110}, {15, 120}, {17, 115}};
  for (int i = 0; i < 4; ++i) {
    const Performance p = runtime::expectedPerformance(kb, kMachines[i], "P1");
    check(p.durationMin == Decimal(expected[i].first) && p.energyKwh == Decimal(expected[i].second),
          fmt::format("{}: got {} min / {} kWh", kMachines[i], p.durationMin.toString(), p.energyKwh.toString()));
  }
  // The same numbers through the query engine.
  const auto table = query::select(kb, R"(SELECT ?m ?d ?e WHERE {
      ?m ex:capableOf ?plan . ?plan ex:expectedPerformance ?p .
      ?p ex:duration ?d . ?p ex:energyCost ?e . })");
  check(table.rows.size() == 4, fmt::format("query returned {} rows", table.rows.size()));
  for (std::size_t r = 0; r < 4; ++r) {
    const int i = static_cast<int>(r);
    check(kb::exLocal(table.at(r, "m")) == kMachines[i] &&
              table.at(r, "d").numeric() == Decimal(expected[i].first) &&
              table.at(r, "e").numeric() == Decimal(expected[i].second),
          fmt::format("query row {} disagrees", r));
  }
}

// ---- 2, 3 -------------------------------------------------------------------

// One successful execution per machine over [0, 1000): busy minutes set the
// uptime, planned minutes over busy minutes the performance efficiency.
// uptimes 0.48 / 0.60 / 0.80 / 0.70, efficiencies 0.95 / 0.93 / 0.80 / 0.85.
std::unique_ptr<kb::KnowledgeBase> snapshotKb() {
  auto kb = test_support::caseStudyKb(4);
  const int busy[] = {480, 600, 800, 700};
  const int planned[] = {456, 558, 640, 595};
  for (int i = 0; i < 4; ++i) {
    const std::string m = kMachines[i];
    const std::string id = runtime::addPlannedExecutionData(*kb, fmt::format("part{}", i + 1), "P1_" + m, 0,
                                                            planned[i], m);
    runtime::updateExecutionData(*kb, id, {runtime::ExecStatus::Running, 0, {}, {}, {}, {}});
    runtime::updateExecutionData(
        *kb, id, {runtime::ExecStatus::Successful, {}, busy[i], {}, test_support::perf(busy[i], "100"), {}});
  }
  return kb;
}

void expectAfterPolicy(const kb::KnowledgeBase& kb) {
  const std::pair<int, const char*> expected[] = {{18, "110.25"}, {18, "110"}, {16, "114"}, {17, "115"}};
  for (int i = 0; i < 4; ++i) {
    const Performance p = runtime::expectedPerformance(kb, kMachines[i], "P1");
    check(p.durationMin == Decimal(expected[i].first) && p.energyKwh == dec(expected[i].second),
          fmt::format("{}: got {} min / {} kWh, want {} / {}", kMachines[i], p.durationMin.toString(),
                      p.energyKwh.toString(), expected[i].first, expected[i].second));
  }
}

void policyReplication() {
  // Injected directly as observations.
  std::vector<sim::MachineObservation> fleet;
  const double uptime[] = {0.48, 0.60, 0.80, 0.70};
  const double eff[] = {0.95, 0.93, 0.80, 0.85};
  auto kb = test_support::caseStudyKb();
  for (int i = 0; i < 4; ++i) {
    const std::string m = kMachines[i];
    fleet.push_back({m, "P1_" + m, runtime::expectedPerformance(*kb, m, "P1"), uptime[i], eff[i]});
  }
  const auto plan = sim::planAdjustments(fleet, sim::PolicyConfig{});
  check(plan.size() == 2 && plan[0].machine == "M1" && plan[1].machine == "M3",
        fmt::format("expected adjustments to M1 and M3, got {}", plan.size()));
  check(plan[0].after.durationMin == Decimal(18) && plan[0].after.energyKwh == dec("110.25"), "M1 plan");
  check(plan[1].after.durationMin == Decimal(16) && plan[1].after.energyKwh == Decimal(114), "M3 plan");

  // Observed from KB history and committed by the resource agent.
  auto snap = snapshotKb();
  const auto observed = snap->read([](const kb::Graph& g) { return sim::observeFleet(g, 0, 1000); });
  for (std::size_t i = 0; i < 4; ++i) {
    check(observed[i].uptime && std::abs(*observed[i].uptime - uptime[i]) < 1e-12 &&
              std::abs(observed[i].perfEfficiency - eff[i]) < 1e-12,
          fmt::format("{} observed differently", observed[i].machine));
  }
  const auto committed = sim::raEvaluateAndAdjust(*snap, sim::PolicyConfig{}, 0, 1000);
  check(committed == plan, "KB-driven adjustment differs from the injected one");
  expectAfterPolicy(*snap);
}

void budgetSafety() {
  auto snap = snapshotKb();
  sim::raEvaluateAndAdjust(*snap, sim::PolicyConfig{}, 0, 1000);
  const Decimal total = snap->read([](const kb::Graph& g) { return sim::fleetEnergy(g); });
  check(total == dec("449.25"), fmt::format("fleet energy {} != 449.25", total.toString()));
  check(total <= Decimal(450), "over budget");
}

// ---- 4 ----------------------------------------------------------------------

void endToEnd() {
  auto kb = test_support::caseStudyKb(0);
  const sim::Scenario s = sim::loadScenario(test_support::fixturePath("scenarios/case_study.toml"));
  const sim::SimResult r = sim::runScenario(*kb, s);
  const kb::SimMinute w = s.policy.evaluationWindowMin;

  // The slowest machine: longest expected duration before the run.
  auto fresh = test_support::caseStudyKb(0);
  std::string slowest;
  Decimal longest = 0;
  for (const char* m : kMachines) {
    const Decimal d = runtime::expectedPerformance(*fresh, m, "P1").durationMin;
    if (d > longest) longest = d, slowest = m;
  }
  auto uptimeIn = [&](kb::SimMinute start) {
    for (const auto& o : r.oee) {
      if (o.resource == slowest && o.windowStart == start) return o.uptime;
    }
    throw Failure{fmt::format("no OEE row for {} at {}", slowest, start)};
  };
  const double first = uptimeIn(0);
  const double second = uptimeIn(w);
  check(first < 0.5, fmt::format("{} first-window uptime {} is not below 0.50", slowest, first));
  check(!r.adjustments.empty() && r.adjustments.front().time == w, "no adjustment at the first tick");
  bool adjusted = false;
  for (const auto& a : r.adjustments) {
    adjusted = adjusted || (a.time == w && a.adjustment.machine == slowest && a.adjustment.durationDelta < 0);
  }
  check(adjusted, fmt::format("{} was not sped up at the first tick", slowest));
  check(second > first && second > 0.5,
        fmt::format("{} uptime {} -> {} does not rise above 0.50", slowest, first, second));
  check(r.initialFleetEnergy <= Decimal(450) && r.maxFleetEnergy <= Decimal(450),
        fmt::format("fleet energy peaked at {}", r.maxFleetEnergy.toString()));
  for (const auto& a : r.adjustments) check(a.fleetEnergyAfter <= Decimal(450), "commit over budget");
}

// ---- 5 ----------------------------------------------------------------------

void lifecycleProperty() {
  const kb::Graph base = test_support::caseStudyKb(3)->read([](const kb::Graph& g) { return g; });
  constexpr int kSequences = 10000;
  constexpr int kSteps = 8;
  std::size_t accepted = 0, rejected = 0;
  for (int seq = 0; seq < kSequences; ++seq) {
    test_support::RandomPatches gen(static_cast<std::uint64_t>(seq));
    kb::KnowledgeBase kb{kb::Graph(base)};
    std::optional<std::string> resource;
    if (gen.coin(0.7)) resource = fmt::format("M{}", gen.pick(1, 4));
    const std::string plan = fmt::format("P1_M{}", gen.pick(1, 4));
    const std::string id = runtime::addPlannedExecutionData(kb, "part1", plan, 0, gen.pick(1, 30), resource);
    std::string cached = kb.dumpTurtle();
    runtime::ExecStatus status = runtime::getExecution(kb, id).status;
    for (int step = 0; step < kSteps; ++step) {
      const runtime::ExecutionPatch patch = gen.next();
      try {
        const runtime::ProcessExecution e = runtime::updateExecutionData(kb, id, patch);
        if (e.status != status && !runtime::isLegalTransition(status, e.status)) {
          throw Failure{fmt::format("sequence {}: {} -> {}", seq, runtime::statusName(status),
                                    runtime::statusName(e.status))};
        }
        if (const auto broken = runtime::invariantViolation(e)) throw Failure{fmt::format("sequence {}: {}", seq, *broken)};
        status = e.status;
        cached = kb.dumpTurtle();
        ++accepted;
      } catch (const Error&) {
        if (kb.dumpTurtle() != cached) {
          throw Failure{fmt::format("sequence {} step {}: rejected patch changed the KB", seq, step)};
        }
        ++rejected;
      }
    }
  }
  check(accepted > 1000 && rejected > 1000, fmt::format("{} accepted / {} rejected", accepted, rejected));
}

// ---- 6 ----------------------------------------------------------------------

void oracleEquivalence() {
  int nonEmpty = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    test_support::RandomTerms gen(seed + 50000);
    const kb::Graph g = gen.graph(197);  // plus up to three subclass facts
    check(g.size() <= 200, "graph too large");
    const auto closed = test_support::typeClosure(g.triples());
    const auto gq = test_support::randomQuery(gen, closed);
    const auto q = query::parse(gq.text);
    const auto actual = query::evalSelect(g, std::get<query::SelectQuery>(q.body));
    const auto expected = test_support::naiveSelect(closed, gq.where, gq.filters, gq.vars, gq.distinct);
    check(actual.vars == gq.vars && actual.rows == expected, fmt::format("seed {}:\n{}", seed, gq.text));
    nonEmpty += actual.rows.empty() ? 0 : 1;
  }
  check(nonEmpty > 100, fmt::format("only {} non-empty answers", nonEmpty));
}

// ---- 7 ----------------------------------------------------------------------

runtime::HistoryRow rowFromTerms(const kb::Term& exec, const kb::Term& emissions, const kb::Term& energy,
                                 const kb::Term& quality, const kb::Term& start, const kb::Term& end) {
  return {kb::exLocal(exec), *emissions.numeric(), *energy.numeric(), *quality.numeric(), *start.dateTime(),
          *end.dateTime()};
}

kb::Term termFromJson(const json& j) {
  if (j["type"] == "uri") return kb::Term::iri(j["value"].get<std::string>());
  return kb::Term::literal(j["value"].get<std::string>(), *kb::datatypeFromIri(j["datatype"].get<std::string>()));
}

void sortRows(std::vector<runtime::HistoryRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.realStart, a.executionId) < std::tie(b.realStart, b.executionId);
  });
}

void historyConsistency() {
  std::size_t rowsSeen = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    test_support::RandomPatches gen(seed + 7000);
    auto kb = test_support::caseStudyKb(3);
    const int n = gen.pick(0, 12);
    for (int i = 0; i < n; ++i) {
      const std::string m = fmt::format("M{}", gen.pick(1, 4));
      const kb::SimMinute start = gen.pick(0, 300);
      const std::string id = runtime::addPlannedExecutionData(*kb, fmt::format("part{}", gen.pick(1, 3)),
                                                              "P1_" + m, start, start + 20, m);
      const int fate = gen.pick(0, 3);  // planned, running, successful, errored
      if (fate == 0) continue;
      runtime::updateExecutionData(*kb, id, {runtime::ExecStatus::Running, start + gen.pick(0, 5), {}, {}, {}, {}});
      if (fate == 1) continue;
      const Performance p{Decimal(gen.pick(15, 25)), dec(fmt::format("{}.{}", gen.pick(90, 130), gen.pick(0, 99)).c_str()),
                          Decimal(gen.pick(0, 3)), dec(gen.coin(0.5) ? "1" : "0.875")};
      runtime::updateExecutionData(*kb, id,
                                   {fate == 2 ? runtime::ExecStatus::Successful : runtime::ExecStatus::Errored, {},
                                    start + 30, {}, p, fate == 3 ? std::optional<std::string>("jam") : std::nullopt});
    }
    const api::ApiService service(*kb);
    for (const char* m : kMachines) {
      const auto history = runtime::getResourceHistory(*kb, m);
      const std::string text = query::resourceHistoryQuery(kb::ex(m));

      const auto table = query::select(*kb, text);
      std::vector<runtime::HistoryRow> direct;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        direct.push_back(rowFromTerms(table.at(r, "execution"), table.at(r, "emissions"), table.at(r, "energyCost"),
                                      table.at(r, "quality"), table.at(r, "realStartTime"),
                                      table.at(r, "realEndTime")));
      }
      const auto reply = test_support::call(service, "POST", "/query", text);
      check(reply.status == 200, reply.raw);
      std::vector<runtime::HistoryRow> viaApi;
      for (const json& row : reply.body["data"]["rows"]) {
        viaApi.push_back(rowFromTerms(termFromJson(row["execution"]), termFromJson(row["emissions"]),
                                      termFromJson(row["energyCost"]), termFromJson(row["quality"]),
                                      termFromJson(row["realStartTime"]), termFromJson(row["realEndTime"])));
      }
      sortRows(direct);
      sortRows(viaApi);
      check(direct == history, fmt::format("seed {} {}: evalSelect differs from getResourceHistory", seed, m));
      check(viaApi == history, fmt::format("seed {} {}: POST /query differs from getResourceHistory", seed, m));
      rowsSeen += history.size();
    }
  }
  check(rowsSeen > 100, fmt::format("only {} history rows generated", rowsSeen));
}

// ---- 8 ----------------------------------------------------------------------

void determinism() {
  const std::string plant = test_support::caseStudyKb(0)->dumpTurtle();
  const sim::Scenario s = sim::loadScenario(test_support::fixturePath("scenarios/case_study.toml"));
  struct Run {
    std::string trace, oee, dump;
    std::vector<runtime::OeeReport> reports;
  };
  auto run = [&] {
    kb::KnowledgeBase kb(kb::loadTurtle(plant));
    const sim::SimResult r = sim::runScenario(kb, s);
    return Run{sim::renderTrace(r.trace), sim::renderOeeCsv(r.oee), kb.dumpTurtle(), r.oee};
  };
  const Run a = run();
  const Run b = run();
  check(a.trace == b.trace, "traces differ");
  check(a.oee == b.oee, "OEE CSVs differ");
  check(a.dump == b.dump, "final dumps differ");
  check(!a.reports.empty(), "no OEE reports");

  const kb::Graph reloaded = kb::loadTurtle(a.dump);
  const auto recomputed = sim::oeeReportSeries(reloaded, s.policy.evaluationWindowMin, s.horizon);
  check(recomputed == a.reports, "OEE recomputed from the dump differs from the simulator's");
}

// ---- 9 ----------------------------------------------------------------------

void roundTrips() {
  const builder::CsvBundle files = [] {
    builder::CsvBundle out;
    for (const char* name : {builder::kResourcesCsv, builder::kProcessesCsv, builder::kFeaturesCsv,
                             builder::kProductsCsv}) {
      out[name] = test_support::readFixture(std::string("case_study/") + name);
    }
    return out;
  }();
  const builder::PlantDescription pd = builder::parseCsvBundle(files);
  check(builder::parseCsvBundle(builder::render(pd)) == pd, "parse(render(pd)) != pd");
  check(builder::render(builder::parseCsvBundle(builder::render(pd))) == builder::render(pd),
        "render is not stable");

  // Every Turtle text the fixtures give rise to: the bare TBox, the built
  // plant, and the state after the shipped scenario.
  std::vector<std::string> dumps;
  dumps.push_back(kb::KnowledgeBase().dumpTurtle());
  auto kb = test_support::caseStudyKb(0);
  dumps.push_back(kb->dumpTurtle());
  sim::runScenario(*kb, sim::loadScenario(test_support::fixturePath("scenarios/case_study.toml")));
  dumps.push_back(kb->dumpTurtle());
  for (const std::string& d : dumps) {
    const kb::Graph g = kb::loadTurtle(d);
    check(kb::dumpTurtle(g) == d, "dump(load(dump)) differs");
    check(kb::loadTurtle(kb::dumpTurtle(g)) == g, "load(dump(g)) != g");
  }
}

struct Criterion {
  int number;
  const char* name;
  double limitSeconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "expected performances match the case-study table", 1, expectedPerformances},
      {2, "resource-agent policy adjusts M1 to 18/110.25 and M3 to 16/114", 1, policyReplication},
      {3, "fleet energy after the adjustment is exactly 449.25 <= 450", 1, budgetSafety},
      {4, "seeded scenario lifts the slowest machine above 0.50 within budget", 10, endToEnd},
      {5, "10^4 random patch sequences respect the lifecycle; rejects leave the dump intact", 30,
       lifecycleProperty},
      {6, "10^3 random queries on graphs <= 200 triples equal the nested-loop oracle", 60, oracleEquivalence},
      {7, "history operation == POST /query == evalSelect on 100 random fixtures", 10, historyConsistency},
      {8, "identical runs are byte-identical; OEE from the dump equals the simulator's", 10, determinism},
      {9, "Turtle and CSV round-trips on all fixtures", 5, roundTrips},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run();
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = fmt::format("unexpected exception: {}", e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty() && seconds >= c.limitSeconds) {
      detail = fmt::format("took {:.3f} s, limit {} s", seconds, c.limitSeconds);
    }
    std::cout << fmt::format("{} {} {} ({:.3f} s, limit {} s)", detail.empty() ? "PASS" : "FAIL", c.number, c.name,
                             seconds, c.limitSeconds);
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << std::endl;
    failed += detail.empty() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
