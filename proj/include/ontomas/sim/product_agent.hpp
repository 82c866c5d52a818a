#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ontomas/builder/plant.hpp"
#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/runtime/runtime.hpp"

namespace ontomas::sim {

using kb::SimMinute;

// One plan a product agent could commit to, with the time its resource is
// next free according to the KB.
struct MachineOption {
  runtime::PlanCandidate candidate;
  SimMinute freeAt = 0;
};

struct MachineChoice {
  std::string machine;
  std::string plan;
  Performance expected;
  SimMinute completion = 0;  // max(now, freeAt) + expected duration
};

// Σ coefficient × metric. Metrics: completionTime (alias makespan),
// energyKwh (alias energy), emissions, quality. Throws ConfigError for any
// other name.
kb::Decimal objectiveScore(const std::vector<builder::Coefficient>& objective, SimMinute completion,
                           const Performance& expected);

// argmin score over the options, ties broken by (resource, plan). Throws
// NoCapableResource when `options` is empty.
MachineChoice chooseMachine(const std::vector<MachineOption>& options, SimMinute now,
                            const std::vector<builder::Coefficient>& objective);

// Latest end the KB commits the resource to: plannedEnd of its planned
// executions, realStart plus planned length of its running ones. Finished
// executions lie in the past and are ignored.
std::optional<SimMinute> resourceBusyUntil(const kb::Graph& g, const std::string& resource);

MachineChoice paSelectMachine(const kb::Graph& g, const std::string& product, SimMinute now);
MachineChoice paSelectMachine(const kb::KnowledgeBase& kb, const std::string& product, SimMinute now);

}  // namespace ontomas::sim
