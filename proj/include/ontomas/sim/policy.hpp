#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ontomas/kb/decimal.hpp"
#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/kb/sim_time.hpp"
#include "ontomas/performance.hpp"

namespace ontomas::sim {

struct PolicyConfig {
  double uptimeThreshold = 0.5;
  kb::Decimal energyBudgetKwh = 450;
  // Energy factor per minute of duration traded: 1 + rate to go one minute
  // faster, 1 - rate to go one minute slower. Compounds on the current cost.
  kb::Decimal tradeRate = kb::Decimal::fromString("0.05");
  kb::SimMinute evaluationWindowMin = 500;
  // Per machine and per direction.
  int speedUpStepsCap = 5;
};

// Throws Error(ConfigError).
void validatePolicy(const PolicyConfig& policy);

// What a resource agent knows about one (machine, plan instance) pair at a
// policy tick. `uptime` is absent when the machine finished nothing in the
// window; such machines are never adjusted but still count toward the fleet
// energy.
struct MachineObservation {
  std::string machine;
  std::string plan;
  Performance current;
  std::optional<double> uptime;
  double perfEfficiency = 1;
};

struct Adjustment {
  std::string machine;
  std::string plan;
  int durationDelta = 0;    // negative: sped up
  kb::Decimal energyFactor;  // (1 +- rate)^steps
  Performance before;
  Performance after;

  friend bool operator==(const Adjustment&, const Adjustment&) = default;
};

// Uptime expected after k one-minute speed-ups: the observed effective
// uptime (uptime * min(perfEfficiency, 1)) scaled by d0 / (d0 - k).
double projectedUptime(double uptime, double perfEfficiency, const kb::Decimal& d0, int k);

// Pure policy. Machines below the threshold, in ascending uptime order, take
// speed-up steps until the projection exceeds the threshold, the step cap is
// hit, or the next step would leave less than one minute. If that pushes the
// fleet over budget, the highest-uptime machine that was not sped up takes
// slow-down steps until the fleet fits (moving to the next one at its cap).
// Result sorted by (machine, plan); empty when nobody is below threshold.
// Throws BudgetInfeasible when no donor can close the gap.
std::vector<Adjustment> planAdjustments(const std::vector<MachineObservation>& fleet,
                                        const PolicyConfig& policy);

// Every (machine, capable plan instance) pair with an expected performance,
// observed over [windowStart, windowEnd) from KB history alone.
std::vector<MachineObservation> observeFleet(const kb::Graph& g, kb::SimMinute windowStart,
                                             kb::SimMinute windowEnd);

// Sum of expected energy over observeFleet's pairs.
kb::Decimal fleetEnergy(const kb::Graph& g);

// Observes, plans and commits through changeResourcePerformance. On
// BudgetInfeasible nothing is committed.
std::vector<Adjustment> raEvaluateAndAdjust(kb::KnowledgeBase& kb, const PolicyConfig& policy,
                                            kb::SimMinute windowStart, kb::SimMinute windowEnd);

}  // namespace ontomas::sim
