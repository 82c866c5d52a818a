#pragma once

#include <map>
#include <string>
#include <vector>

#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/runtime/runtime.hpp"
#include "ontomas/sim/config.hpp"
#include "ontomas/sim/policy.hpp"

// Discrete-event model of the case-study cell: parts arrive in B1, R1 moves
// them to B2, where each part's agent picks a machine and plans an execution;
// R2 loads the machine, and after processing unloads the part to B3, which is
// the exit. Agents act only through runtime-model operations on the KB, and
// KB operations take no simulated time.
namespace ontomas::sim {

struct TraceRecord {
  SimMinute time = 0;
  std::string event;
  std::string entity;
  std::string detail;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct CommittedAdjustment {
  SimMinute time = 0;
  Adjustment adjustment;
  kb::Decimal fleetEnergyAfter;
};

struct SimResult {
  std::vector<TraceRecord> trace;
  // Per window of policy.evaluationWindowMin (the last one clipped to the
  // horizon) and per machine, computed from the KB after the run.
  std::vector<runtime::OeeReport> oee;
  std::vector<CommittedAdjustment> adjustments;
  std::map<std::string, SimMinute> exits;  // part -> minute it reached B3
  std::size_t entered = 0;
  kb::Decimal initialFleetEnergy;
  kb::Decimal maxFleetEnergy;  // over the initial state and every commit
  std::vector<MachineObservation> finalFleet;
};

// Runs events with time < horizon. The KB must already hold the plant (the
// built ABox) and at least one product to use as the part template.
// Throws ConfigError for a missing template, NoCapableResource when a part
// has nowhere to go, and lets runtime errors through.
SimResult runScenario(kb::KnowledgeBase& kb, const Scenario& scenario);

// OEE of every machine over consecutive windows [k*window, (k+1)*window)
// clipped to the horizon, sorted by (windowStart, machine). Reads nothing
// but the graph.
std::vector<runtime::OeeReport> oeeReportSeries(const kb::Graph& g, SimMinute window, SimMinute horizon);

// Tab-separated, one record per line, with a header line.
std::string renderTrace(const std::vector<TraceRecord>& trace);
std::string renderOeeCsv(const std::vector<runtime::OeeReport>& reports);

}  // namespace ontomas::sim
