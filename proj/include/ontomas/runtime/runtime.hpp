#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontomas/builder/plant.hpp"
#include "ontomas/kb/knowledge_base.hpp"
#include "ontomas/kb/sim_time.hpp"
#include "ontomas/performance.hpp"

// Typed operations over the shared KB. Entity ids are local names in the ex:
// namespace ("M1", "part7", "exec000001"). Mutations are written as SPARQL
// updates and each runs under one KB write lock; they validate before
// touching the graph, so a thrown error leaves the KB unchanged.
namespace ontomas::runtime {

using kb::SimMinute;

enum class ExecStatus { Proposed, Planned, Running, Successful, Errored };

std::string_view statusName(ExecStatus status);
std::optional<ExecStatus> statusFromName(std::string_view name);
bool isTerminal(ExecStatus status);
// proposed -> planned -> running -> {successful, errored}
bool isLegalTransition(ExecStatus from, ExecStatus to);

struct ProcessExecution {
  std::string id;
  std::string product;
  std::string plan;
  std::optional<std::string> resource;
  ExecStatus status = ExecStatus::Proposed;
  SimMinute plannedStart = 0;
  SimMinute plannedEnd = 0;
  std::optional<SimMinute> realStart;
  std::optional<SimMinute> realEnd;
  std::optional<Performance> realPerformance;
  std::optional<std::string> errorMessage;

  friend bool operator==(const ProcessExecution&, const ProcessExecution&) = default;
};

// First violated record invariant, if any.
std::optional<std::string> invariantViolation(const ProcessExecution& e);

struct ExecutionPatch {
  std::optional<ExecStatus> status;
  std::optional<SimMinute> realStart;
  std::optional<SimMinute> realEnd;
  std::optional<std::string> resource;
  std::optional<Performance> realPerformance;
  std::optional<std::string> errorMessage;
};

// Creates an execution and returns its id. With a resource the record is
// created `proposed` and acknowledged to `planned` in the same write; without
// one it stays `proposed`.
// Throws UnknownEntity (product, plan or resource), then InvalidWindow.
std::string addPlannedExecutionData(kb::KnowledgeBase& kb, const std::string& product,
                                    const std::string& plan, SimMinute plannedStart,
                                    SimMinute plannedEnd,
                                    const std::optional<std::string>& resource = std::nullopt);

// Throws UnknownEntity, IllegalTransition, MissingField, InvalidWindow or
// DomainViolation (bad real performance).
ProcessExecution updateExecutionData(kb::KnowledgeBase& kb, const std::string& executionId,
                                     const ExecutionPatch& patch);

std::optional<ProcessExecution> findExecution(const kb::Graph& g, const std::string& executionId);
ProcessExecution getExecution(const kb::KnowledgeBase& kb, const std::string& executionId);
// Every execution in the graph, sorted by (plannedStart, id).
std::vector<ProcessExecution> listExecutions(const kb::Graph& g);

struct ProductStatus {
  std::string product;
  std::vector<std::string> features;
  std::optional<SimMinute> deadline;
  std::vector<ProcessExecution> executions;  // sorted by (plannedStart, id)
  std::string latestStatus;                  // "no-executions" when empty
};

ProductStatus getProductStatus(const kb::KnowledgeBase& kb, const std::string& product);

struct HistoryRow {
  std::string executionId;
  kb::Decimal emissions;
  kb::Decimal energyKwh;
  kb::Decimal quality;
  SimMinute realStart = 0;
  SimMinute realEnd = 0;

  friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

// Runs the resource-history query; rows sorted by (realStart, executionId).
// Throws UnknownEntity for an unknown resource.
std::vector<HistoryRow> getResourceHistory(const kb::KnowledgeBase& kb, const std::string& resource,
                                           std::string_view status = "successful");
std::vector<HistoryRow> historyFromGraph(const kb::Graph& g, const std::string& resource,
                                         std::string_view status = "successful");

// The ProcessPlan node holding `resource`'s expected performance for `plan`:
// "<plan>_<resource>" when it exists, else `plan` itself if the resource is
// capable of it. Throws UnknownEntity otherwise.
std::string resolvePlanInstance(const kb::Graph& g, const std::string& resource,
                                const std::string& plan);

Performance expectedPerformance(const kb::KnowledgeBase& kb, const std::string& resource,
                                const std::string& plan);

// Rewrites the expected performance values. Throws UnknownEntity, then
// DomainViolation.
Performance changeResourcePerformance(kb::KnowledgeBase& kb, const std::string& resource,
                                      const std::string& plan, const Performance& performance);

// A plan instance some resource is capable of that realizes one of a
// product's features. This is all a product agent learns about its options.
struct PlanCandidate {
  std::string resource;
  std::string plan;
  Performance expected;

  friend bool operator==(const PlanCandidate&, const PlanCandidate&) = default;
};

// Sorted by (resource, plan). Throws UnknownEntity for an unknown product.
std::vector<PlanCandidate> candidatePlans(const kb::Graph& g, const std::string& product);

// The product's objective coefficients, sorted by metric.
std::vector<builder::Coefficient> objectiveOf(const kb::Graph& g, const std::string& product);

// Local names of every (entailed) instance of ex:<cls>, sorted.
std::vector<std::string> instancesOf(const kb::Graph& g, std::string_view cls);

// Adds one product (typed, features, deadline, objective) to the ABox.
// Throws UnknownEntity for an undeclared feature and DomainViolation when the
// id is already in use.
void registerProduct(kb::KnowledgeBase& kb, const builder::ProductSpec& product);

struct OeeReport {
  std::string resource;
  SimMinute windowStart = 0;
  SimMinute windowEnd = 0;
  double uptime = 0;          // busy minutes / window minutes
  double perfEfficiency = 1;  // planned minutes / real minutes, raw
  double qualityRate = 1;
  double oee = 0;             // uptime * min(perfEfficiency, 1) * qualityRate
  std::size_t executions = 0;

  friend bool operator==(const OeeReport&, const OeeReport&) = default;
};

// One completed execution as the OEE computation sees it.
struct OeeSample {
  SimMinute realStart = 0;
  SimMinute realEnd = 0;
  SimMinute plannedMinutes = 0;
  double quality = 1;
};

// Pure OEE over [windowStart, windowEnd). Throws EmptyWindow when
// windowEnd <= windowStart.
OeeReport computeOee(const std::string& resource, SimMinute windowStart, SimMinute windowEnd,
                     const std::vector<OeeSample>& samples);

// OEE of a resource from its successful history and the executions' planned
// windows.
OeeReport computeOee(const kb::KnowledgeBase& kb, const std::string& resource,
                     SimMinute windowStart, SimMinute windowEnd);
OeeReport computeOee(const kb::Graph& g, const std::string& resource, SimMinute windowStart,
                     SimMinute windowEnd);

}  // namespace ontomas::runtime
