#include "ontomas/sim/product_agent.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::sim {

using kb::Decimal;

kb::Decimal objectiveScore(const std::vector<builder::Coefficient>& objective, SimMinute completion,
                           const Performance& expected) {
  Decimal score = 0;
  for (const builder::Coefficient& c : objective) {
    Decimal metric;
    if (c.metric == "completionTime" || c.metric == "makespan") {
      metric = Decimal(completion);
    } else if (c.metric == "energyKwh" || c.metric == "energy") {
      metric = expected.energyKwh;
    } else if (c.metric == "emissions") {
      metric = expected.emissions;
    } else if (c.metric == "quality") {
      metric = expected.quality;
    } else {
      throw Error(ErrorCode::ConfigError, fmt::format("unknown objective metric '{}'", c.metric));
    }
    score += c.value * metric;
  }
  return score;
}

MachineChoice chooseMachine(const std::vector<MachineOption>& options, SimMinute now,
                            const std::vector<builder::Coefficient>& objective) {
  std::optional<MachineChoice> best;
  Decimal bestScore;
  for (const MachineOption& o : options) {
    const Decimal& d = o.candidate.expected.durationMin;
    // Durations are whole minutes in practice; round a fractional one up.
    const auto minutes = static_cast<SimMinute>(std::ceil(d.toDouble()));
    MachineChoice c{o.candidate.resource, o.candidate.plan, o.candidate.expected,
                    std::max(now, o.freeAt) + minutes};
    const Decimal score = objectiveScore(objective, c.completion, c.expected);
    if (!best || score < bestScore ||
        (score == bestScore && std::tie(c.machine, c.plan) < std::tie(best->machine, best->plan))) {
      best = std::move(c);
      bestScore = score;
    }
  }
  if (!best) throw Error(ErrorCode::NoCapableResource, "no resource is capable of any plan for the product");
  return *best;
}

std::optional<SimMinute> resourceBusyUntil(const kb::Graph& g, const std::string& resource) {
  std::optional<SimMinute> until;
  auto consider = [&](const std::string& status) {
    g.forEachMatch({std::nullopt, kb::ex("hasStatus"), kb::Term::string(status)}, [&](const kb::Triple& t) {
      if (!g.contains({t.subject, kb::ex("runsOnResource"), kb::ex(resource)})) return;
      const auto e = runtime::findExecution(g, kb::exLocal(t.subject));
      if (!e) return;
      const SimMinute end = e->realStart ? *e->realStart + (e->plannedEnd - e->plannedStart) : e->plannedEnd;
      until = std::max(until.value_or(end), end);
    });
  };
  consider("planned");
  consider("running");
  return until;
}

MachineChoice paSelectMachine(const kb::Graph& g, const std::string& product, SimMinute now) {
  std::vector<MachineOption> options;
  for (runtime::PlanCandidate& c : runtime::candidatePlans(g, product)) {
    const SimMinute freeAt = resourceBusyUntil(g, c.resource).value_or(now);
    options.push_back({std::move(c), freeAt});
  }
  return chooseMachine(options, now, runtime::objectiveOf(g, product));
}

MachineChoice paSelectMachine(const kb::KnowledgeBase& kb, const std::string& product, SimMinute now) {
  return kb.read([&](const kb::Graph& g) { return paSelectMachine(g, product, now); });
}

}  // namespace ontomas::sim
