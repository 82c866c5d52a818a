#include "ontomas/sim/policy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/runtime/runtime.hpp"

namespace ontomas::sim {

using kb::Decimal;

void validatePolicy(const PolicyConfig& p) {
  auto bad = [](const std::string& message) { return Error(ErrorCode::ConfigError, message); };
  if (!(p.uptimeThreshold > 0 && p.uptimeThreshold < 1)) throw bad("uptime threshold must be in (0, 1)");
  if (p.tradeRate <= Decimal(0) || p.tradeRate >= Decimal(1)) throw bad("trade rate must be in (0, 1)");
  if (p.energyBudgetKwh.isNegative()) throw bad("energy budget must not be negative");
  if (p.evaluationWindowMin <= 0) throw bad("evaluation window must be positive");
  if (p.speedUpStepsCap < 0) throw bad("step cap must not be negative");
}

double projectedUptime(double uptime, double perfEfficiency, const Decimal& d0, int k) {
  const double d = d0.toDouble();
  return uptime * std::min(perfEfficiency, 1.0) * d / (d - k);
}

namespace {

Decimal power(const Decimal& base, int k) {
  Decimal out = 1;
  for (int i = 0; i < k; ++i) out *= base;
  return out;
}

}  // namespace

std::vector<Adjustment> planAdjustments(const std::vector<MachineObservation>& fleet,
                                        const PolicyConfig& policy) {
  validatePolicy(policy);
  const Decimal faster = Decimal(1) + policy.tradeRate;
  const Decimal slower = Decimal(1) - policy.tradeRate;

  // Working copy indexed like `fleet`; steps > 0 means slowed, < 0 sped up.
  std::vector<Performance> next;
  std::vector<int> steps(fleet.size(), 0);
  Decimal total = 0;
  for (const MachineObservation& m : fleet) {
    next.push_back(m.current);
    total += m.current.energyKwh;
  }

  std::vector<std::size_t> below;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    if (fleet[i].uptime && *fleet[i].uptime < policy.uptimeThreshold) below.push_back(i);
  }
  std::sort(below.begin(), below.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(*fleet[a].uptime, fleet[a].machine, fleet[a].plan) <
           std::tie(*fleet[b].uptime, fleet[b].machine, fleet[b].plan);
  });

  std::set<std::string> spedUp;
  for (std::size_t i : below) {
    const MachineObservation& m = fleet[i];
    const Decimal& d0 = m.current.durationMin;
    int k = 0;
    while (k < policy.speedUpStepsCap && d0 - Decimal(k + 1) >= Decimal(1) &&
           projectedUptime(*m.uptime, m.perfEfficiency, d0, k) <= policy.uptimeThreshold) {
      ++k;
    }
    if (k == 0) continue;
    steps[i] = -k;
    next[i].durationMin = d0 - Decimal(k);
    next[i].energyKwh = m.current.energyKwh * power(faster, k);
    total += next[i].energyKwh - m.current.energyKwh;
    spedUp.insert(m.machine);
  }
  if (spedUp.empty()) return {};

  while (total > policy.energyBudgetKwh) {
    std::optional<std::size_t> donor;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const MachineObservation& m = fleet[i];
      if (!m.uptime || spedUp.contains(m.machine) || steps[i] >= policy.speedUpStepsCap) continue;
      // Highest uptime first, then lowest id.
      if (!donor || *m.uptime > *fleet[*donor].uptime ||
          (*m.uptime == *fleet[*donor].uptime && m.machine < fleet[*donor].machine)) {
        donor = i;
      }
    }
    if (!donor) {
      throw Error(ErrorCode::BudgetInfeasible,
                  fmt::format("fleet energy {} kWh cannot be brought within the {} kWh budget",
                              total.toString(), policy.energyBudgetKwh.toString()));
    }
    const Decimal before = next[*donor].energyKwh;
    next[*donor].durationMin += Decimal(1);
    next[*donor].energyKwh *= slower;
    total += next[*donor].energyKwh - before;
    ++steps[*donor];
  }

  std::vector<Adjustment> out;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    if (steps[i] == 0) continue;
    const int k = steps[i];
    out.push_back({fleet[i].machine, fleet[i].plan, k,
                   k < 0 ? power(faster, -k) : power(slower, k), fleet[i].current, next[i]});
  }
  std::sort(out.begin(), out.end(), [](const Adjustment& a, const Adjustment& b) {
    return std::tie(a.machine, a.plan) < std::tie(b.machine, b.plan);
  });
  return out;
}

std::vector<MachineObservation> observeFleet(const kb::Graph& g, kb::SimMinute windowStart,
                                             kb::SimMinute windowEnd) {
  std::vector<MachineObservation> out;
  for (const std::string& machine : runtime::instancesOf(g, "Machine")) {
    std::optional<runtime::OeeReport> report;
    if (windowEnd > windowStart) report = runtime::computeOee(g, machine, windowStart, windowEnd);
    std::set<std::string> plans;
    for (const kb::Triple& t : g.match({kb::ex(machine), kb::ex("capableOf"), std::nullopt})) {
      plans.insert(kb::exLocal(t.object));
    }
    for (const std::string& plan : plans) {
      const auto node = g.match({kb::ex(plan), kb::ex("expectedPerformance"), std::nullopt});
      if (node.empty()) continue;
      auto value = [&](const char* p) -> std::optional<Decimal> {
        const auto found = g.match({node.front().object, kb::ex(p), std::nullopt});
        return found.empty() ? std::nullopt : found.front().object.numeric();
      };
      const auto d = value("duration"), e = value("energyCost"), em = value("emissions"), q = value("quality");
      if (!d || !e || !em || !q) continue;
      MachineObservation m{machine, plan, {*d, *e, *em, *q}, std::nullopt, 1};
      if (report && report->executions > 0) {
        m.uptime = report->uptime;
        m.perfEfficiency = report->perfEfficiency;
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

Decimal fleetEnergy(const kb::Graph& g) {
  Decimal total = 0;
  for (const MachineObservation& m : observeFleet(g, 0, 0)) total += m.current.energyKwh;
  return total;
}

std::vector<Adjustment> raEvaluateAndAdjust(kb::KnowledgeBase& kb, const PolicyConfig& policy,
                                            kb::SimMinute windowStart, kb::SimMinute windowEnd) {
  const auto fleet = kb.read([&](const kb::Graph& g) { return observeFleet(g, windowStart, windowEnd); });
  std::vector<Adjustment> plan = planAdjustments(fleet, policy);
  for (const Adjustment& a : plan) runtime::changeResourcePerformance(kb, a.machine, a.plan, a.after);
  return plan;
}

}  // namespace ontomas::sim
