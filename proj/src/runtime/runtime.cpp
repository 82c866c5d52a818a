#include "ontomas/runtime/runtime.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/query/evaluator.hpp"
#include "ontomas/query/resource_history.hpp"

namespace ontomas::runtime {

using kb::Decimal;
using kb::ex;
using kb::Graph;
using kb::Term;
using kb::Triple;

std::string_view statusName(ExecStatus status) {
  switch (status) {
    case ExecStatus::Proposed: return "proposed";
    case ExecStatus::Planned: return "planned";
    case ExecStatus::Running: return "running";
    case ExecStatus::Successful: return "successful";
    case ExecStatus::Errored: return "errored";
  }
  return "proposed";
}

std::optional<ExecStatus> statusFromName(std::string_view name) {
  for (ExecStatus s : {ExecStatus::Proposed, ExecStatus::Planned, ExecStatus::Running,
                       ExecStatus::Successful, ExecStatus::Errored}) {
    if (statusName(s) == name) return s;
  }
  return std::nullopt;
}

bool isTerminal(ExecStatus status) {
  return status == ExecStatus::Successful || status == ExecStatus::Errored;
}

bool isLegalTransition(ExecStatus from, ExecStatus to) {
  switch (from) {
    case ExecStatus::Proposed: return to == ExecStatus::Planned;
    case ExecStatus::Planned: return to == ExecStatus::Running;
    case ExecStatus::Running: return isTerminal(to);
    default: return false;
  }
}

std::optional<std::string> invariantViolation(const ProcessExecution& e) {
  if (e.plannedStart > e.plannedEnd) return "plannedStart is after plannedEnd";
  const bool started = e.status == ExecStatus::Running || isTerminal(e.status);
  if (started && !e.resource) return "resource";
  if (started && !e.realStart) return "realStart";
  if (e.status == ExecStatus::Successful && !e.realEnd) return "realEnd";
  if (e.status == ExecStatus::Successful && !e.realPerformance) return "realPerformance";
  if (e.status == ExecStatus::Errored && !e.errorMessage) return "errorMessage";
  if (e.realStart && e.realEnd && *e.realStart > *e.realEnd) return "realStart is after realEnd";
  return std::nullopt;
}

namespace {

// ---- graph reading helpers -------------------------------------------------

Term entity(const std::string& id, std::string_view what) {
  if (!kb::isSafeLocalName(id)) {
    throw Error(ErrorCode::UnknownEntity, fmt::format("unknown {} '{}'", what, id));
  }
  return ex(id);
}

bool hasType(const Graph& g, const Term& s, const Term& cls) {
  bool found = false;
  g.forEachEntailed({s, kb::rdf::type(), cls}, [&](const Triple&) { found = true; });
  return found;
}

Term requireEntity(const Graph& g, const std::string& id, std::string_view cls,
                   std::string_view what) {
  Term t = entity(id, what);
  if (!hasType(g, t, ex(cls))) {
    throw Error(ErrorCode::UnknownEntity, fmt::format("unknown {} '{}'", what, id));
  }
  return t;
}

std::optional<Term> objectOf(const Graph& g, const Term& s, const Term& p) {
  const auto found = g.match({s, p, std::nullopt});
  if (found.empty()) return std::nullopt;
  return found.front().object;
}

std::optional<Decimal> decimalOf(const Graph& g, const Term& s, std::string_view p) {
  auto o = objectOf(g, s, ex(p));
  if (!o) return std::nullopt;
  return o->numeric();
}

std::optional<kb::SimMinute> timeOf(const Graph& g, const Term& s, std::string_view p) {
  auto o = objectOf(g, s, ex(p));
  if (!o) return std::nullopt;
  return o->dateTime();
}

std::optional<Performance> performanceOf(const Graph& g, const Term& node) {
  auto duration = decimalOf(g, node, "duration");
  auto energy = decimalOf(g, node, "energyCost");
  auto emissions = decimalOf(g, node, "emissions");
  auto quality = decimalOf(g, node, "quality");
  if (!duration || !energy || !emissions || !quality) return std::nullopt;
  return Performance{*duration, *energy, *emissions, *quality};
}

// ---- SPARQL text helpers ---------------------------------------------------

std::string statement(const Term& s, const Term& p, const Term& o) {
  return fmt::format("  {} {} {} .\n", s.canonical(), p.canonical(), o.canonical());
}

std::string block(const std::vector<Triple>& triples) {
  std::string out;
  for (const Triple& t : triples) out += statement(t.subject, t.predicate, t.object);
  return out;
}

void runUpdate(Graph& g, const std::string& text) {
  query::evalUpdate(g, query::parse(text));
}

// DELETE { removed } INSERT { added } WHERE { <anchor> a <cls> }
void rewrite(Graph& g, const Term& anchor, const Term& cls, const std::vector<Triple>& removed,
             const std::vector<Triple>& added) {
  if (removed.empty() && added.empty()) return;
  runUpdate(g, fmt::format("DELETE {{\n{}}}\nINSERT {{\n{}}}\nWHERE {{\n{}}}\n", block(removed),
                           block(added), statement(anchor, kb::rdf::type(), cls)));
}

std::vector<Triple> performanceTriples(const Term& node, const Performance& p) {
  return {
      {node, ex("duration"), Term::decimal(p.durationMin)},
      {node, ex("energyCost"), Term::decimal(p.energyKwh)},
      {node, ex("emissions"), Term::decimal(p.emissions)},
      {node, ex("quality"), Term::decimal(p.quality)},
  };
}

// The execution statements an update may change.
std::vector<Triple> mutableTriples(const ProcessExecution& e) {
  const Term s = ex(e.id);
  std::vector<Triple> out{{s, ex("hasStatus"), Term::string(std::string(statusName(e.status)))}};
  if (e.resource) out.push_back({s, ex("runsOnResource"), ex(*e.resource)});
  if (e.realStart) out.push_back({s, ex("realStartTime"), Term::dateTime(*e.realStart)});
  if (e.realEnd) out.push_back({s, ex("realEndTime"), Term::dateTime(*e.realEnd)});
  if (e.errorMessage) out.push_back({s, ex("hasErrorMessage"), Term::string(*e.errorMessage)});
  if (e.realPerformance) {
    const Term node = ex(e.id + "_real");
    out.push_back({s, ex("realPerformance"), node});
    out.push_back({node, kb::rdf::type(), ex("Performance")});
    for (Triple& t : performanceTriples(node, *e.realPerformance)) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string nextExecutionId(const Graph& g) {
  long long highest = 0;
  g.forEachMatch({std::nullopt, kb::rdf::type(), ex("ProcessExecution")}, [&](const Triple& t) {
    const std::string local = kb::exLocal(t.subject);
    if (local.size() > 4 && local.compare(0, 4, "exec") == 0 &&
        std::all_of(local.begin() + 4, local.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      highest = std::max(highest, std::stoll(local.substr(4)));
    }
  });
  return fmt::format("exec{:06d}", highest + 1);
}

[[noreturn]] void missing(ExecStatus status, std::string_view field) {
  throw Error(ErrorCode::MissingField,
              fmt::format("status '{}' requires {}", statusName(status), field));
}

}  // namespace

// ---- executions ------------------------------------------------------------

std::optional<ProcessExecution> findExecution(const Graph& g, const std::string& executionId) {
  if (!kb::isSafeLocalName(executionId)) return std::nullopt;
  const Term s = ex(executionId);
  if (!hasType(g, s, ex("ProcessExecution"))) return std::nullopt;
  ProcessExecution e;
  e.id = executionId;
  const auto owners = g.match({std::nullopt, ex("hasProcessExecution"), s});
  if (!owners.empty()) e.product = kb::exLocal(owners.front().subject);
  if (auto plan = objectOf(g, s, ex("runsProcessPlan"))) e.plan = kb::exLocal(*plan);
  if (auto r = objectOf(g, s, ex("runsOnResource"))) e.resource = kb::exLocal(*r);
  const auto statusTerm = objectOf(g, s, ex("hasStatus"));
  const auto status = statusTerm ? statusFromName(statusTerm->lexical()) : std::nullopt;
  if (!status) {
    throw Error(ErrorCode::DomainViolation,
                fmt::format("execution '{}' has no valid status", executionId));
  }
  e.status = *status;
  e.plannedStart = timeOf(g, s, "plannedStartTime").value_or(0);
  e.plannedEnd = timeOf(g, s, "plannedEndTime").value_or(e.plannedStart);
  e.realStart = timeOf(g, s, "realStartTime");
  e.realEnd = timeOf(g, s, "realEndTime");
  if (auto node = objectOf(g, s, ex("realPerformance"))) e.realPerformance = performanceOf(g, *node);
  if (auto msg = objectOf(g, s, ex("hasErrorMessage"))) e.errorMessage = msg->lexical();
  return e;
}

ProcessExecution getExecution(const kb::KnowledgeBase& kb, const std::string& executionId) {
  return kb.read([&](const Graph& g) {
    auto e = findExecution(g, executionId);
    if (!e) throw Error(ErrorCode::UnknownEntity, fmt::format("unknown execution '{}'", executionId));
    return *e;
  });
}

std::vector<ProcessExecution> listExecutions(const Graph& g) {
  std::vector<ProcessExecution> out;
  for (const Triple& t : g.match({std::nullopt, kb::rdf::type(), ex("ProcessExecution")})) {
    if (auto e = findExecution(g, kb::exLocal(t.subject))) out.push_back(std::move(*e));
  }
  std::sort(out.begin(), out.end(), [](const ProcessExecution& a, const ProcessExecution& b) {
    return std::tie(a.plannedStart, a.id) < std::tie(b.plannedStart, b.id);
  });
  return out;
}

std::string addPlannedExecutionData(kb::KnowledgeBase& kb, const std::string& product,
                                    const std::string& plan, SimMinute plannedStart,
                                    SimMinute plannedEnd,
                                    const std::optional<std::string>& resource) {
  return kb.write([&](Graph& g) {
    const Term productTerm = requireEntity(g, product, "Product", "product");
    const Term planTerm = requireEntity(g, plan, "ProcessPlan", "process plan");
    std::optional<Term> resourceTerm;
    if (resource) resourceTerm = requireEntity(g, *resource, "Resource", "resource");
    if (plannedStart > plannedEnd) {
      throw Error(ErrorCode::InvalidWindow,
                  fmt::format("plannedStart {} is after plannedEnd {}", kb::formatDateTime(plannedStart),
                              kb::formatDateTime(plannedEnd)));
    }
    const std::string id = nextExecutionId(g);
    const Term e = ex(id);
    const std::vector<Triple> created = {
        {e, kb::rdf::type(), ex("ProcessExecution")},
        {e, ex("hasStatus"), Term::string("proposed")},
        {e, ex("runsProcessPlan"), planTerm},
        {e, ex("plannedStartTime"), Term::dateTime(plannedStart)},
        {e, ex("plannedEndTime"), Term::dateTime(plannedEnd)},
        {productTerm, ex("hasProcessExecution"), e},
    };
    runUpdate(g, "INSERT DATA {\n" + block(created) + "}\n");
    if (resourceTerm) {
      rewrite(g, e, ex("ProcessExecution"), {{e, ex("hasStatus"), Term::string("proposed")}},
              {{e, ex("hasStatus"), Term::string("planned")}, {e, ex("runsOnResource"), *resourceTerm}});
    }
    return id;
  });
}

ProcessExecution updateExecutionData(kb::KnowledgeBase& kb, const std::string& executionId,
                                     const ExecutionPatch& patch) {
  return kb.write([&](Graph& g) {
    const auto current = findExecution(g, executionId);
    if (!current) {
      throw Error(ErrorCode::UnknownEntity, fmt::format("unknown execution '{}'", executionId));
    }
    if (isTerminal(current->status)) {
      throw Error(ErrorCode::IllegalTransition,
                  fmt::format("execution '{}' is {} and can no longer change", executionId,
                              statusName(current->status)));
    }
    if (patch.status && *patch.status != current->status &&
        !isLegalTransition(current->status, *patch.status)) {
      throw Error(ErrorCode::IllegalTransition,
                  fmt::format("{} -> {} is not allowed", statusName(current->status),
                              statusName(*patch.status)));
    }
    if (patch.resource) requireEntity(g, *patch.resource, "Resource", "resource");
    if (patch.realPerformance) validatePerformance(*patch.realPerformance);

    ProcessExecution next = *current;
    if (patch.status) next.status = *patch.status;
    if (patch.realStart) next.realStart = patch.realStart;
    if (patch.realEnd) next.realEnd = patch.realEnd;
    if (patch.resource) next.resource = patch.resource;
    if (patch.realPerformance) next.realPerformance = patch.realPerformance;
    if (patch.errorMessage) next.errorMessage = patch.errorMessage;

    const bool started = next.status == ExecStatus::Running || isTerminal(next.status);
    if (started && !next.resource) missing(next.status, "resource");
    if (started && !next.realStart) missing(next.status, "realStart");
    if (next.status == ExecStatus::Successful && !next.realEnd) missing(next.status, "realEnd");
    if (next.status == ExecStatus::Successful && !next.realPerformance) {
      missing(next.status, "realPerformance");
    }
    if (next.status == ExecStatus::Errored && !next.errorMessage) missing(next.status, "errorMessage");
    if (next.realStart && next.realEnd && *next.realStart > *next.realEnd) {
      throw Error(ErrorCode::InvalidWindow,
                  fmt::format("realStart {} is after realEnd {}", kb::formatDateTime(*next.realStart),
                              kb::formatDateTime(*next.realEnd)));
    }

    const std::vector<Triple> before = mutableTriples(*current);
    const std::vector<Triple> after = mutableTriples(next);
    std::vector<Triple> removed;
    std::vector<Triple> added;
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                        std::back_inserter(removed));
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                        std::back_inserter(added));
    rewrite(g, ex(executionId), ex("ProcessExecution"), removed, added);
    return next;
  });
}

// ---- products --------------------------------------------------------------

ProductStatus getProductStatus(const kb::KnowledgeBase& kb, const std::string& product) {
  return kb.read([&](const Graph& g) {
    const Term p = requireEntity(g, product, "Product", "product");
    ProductStatus status;
    status.product = product;
    for (const Triple& t : g.match({p, ex("defines"), std::nullopt})) {
      status.features.push_back(kb::exLocal(t.object));
    }
    status.deadline = timeOf(g, p, "deadline");
    for (const Triple& t : g.match({p, ex("hasProcessExecution"), std::nullopt})) {
      if (auto e = findExecution(g, kb::exLocal(t.object))) status.executions.push_back(std::move(*e));
    }
    std::sort(status.executions.begin(), status.executions.end(),
              [](const ProcessExecution& a, const ProcessExecution& b) {
                return std::tie(a.plannedStart, a.id) < std::tie(b.plannedStart, b.id);
              });
    status.latestStatus = status.executions.empty()
                              ? "no-executions"
                              : std::string(statusName(status.executions.back().status));
    return status;
  });
}

void registerProduct(kb::KnowledgeBase& kb, const builder::ProductSpec& product) {
  kb.write([&](Graph& g) {
    if (!kb::isSafeLocalName(product.id)) {
      throw Error(ErrorCode::DomainViolation, fmt::format("'{}' is not a valid identifier", product.id));
    }
    if (!g.match({ex(product.id), std::nullopt, std::nullopt}).empty()) {
      throw Error(ErrorCode::DomainViolation, fmt::format("id '{}' is already in use", product.id));
    }
    for (const std::string& f : product.features) requireEntity(g, f, "Feature", "feature");
    builder::PlantDescription single;
    single.products.push_back(product);
    builder::buildAbox(g, single);
  });
}

std::vector<PlanCandidate> candidatePlans(const Graph& g, const std::string& product) {
  const Term p = requireEntity(g, product, "Product", "product");
  const query::Query q = query::parse(fmt::format(
      "SELECT DISTINCT ?resource ?plan WHERE {{\n"
      "  {} ex:defines ?feature .\n"
      "  ?plan ex:realizes ?feature .\n"
      "  ?resource ex:capableOf ?plan .\n"
      "}}\n",
      p.canonical()));
  const query::ResultTable table = query::evalSelect(g, std::get<query::SelectQuery>(q.body));
  std::vector<PlanCandidate> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const Term& plan = table.at(i, "plan");
    const auto node = objectOf(g, plan, ex("expectedPerformance"));
    auto perf = node ? performanceOf(g, *node) : std::nullopt;
    if (!perf) continue;
    out.push_back({kb::exLocal(table.at(i, "resource")), kb::exLocal(plan), *perf});
  }
  std::sort(out.begin(), out.end(), [](const PlanCandidate& a, const PlanCandidate& b) {
    return std::tie(a.resource, a.plan) < std::tie(b.resource, b.plan);
  });
  return out;
}

std::vector<builder::Coefficient> objectiveOf(const Graph& g, const std::string& product) {
  const Term p = requireEntity(g, product, "Product", "product");
  std::vector<builder::Coefficient> out;
  for (const Triple& f : g.match({p, ex("hasObjectiveFunction"), std::nullopt})) {
    for (const Triple& c : g.match({f.object, ex("hasCoefficient"), std::nullopt})) {
      const auto metric = objectOf(g, c.object, ex("coefficientFor"));
      const auto value = decimalOf(g, c.object, "hasValue");
      if (metric && value) out.push_back({metric->lexical(), *value});
    }
  }
  std::sort(out.begin(), out.end(), [](const builder::Coefficient& a, const builder::Coefficient& b) {
    return a.metric < b.metric;
  });
  return out;
}

std::vector<std::string> instancesOf(const Graph& g, std::string_view cls) {
  std::set<std::string> out;
  g.forEachEntailed({std::nullopt, kb::rdf::type(), ex(cls)},
                    [&](const Triple& t) { out.insert(kb::exLocal(t.subject)); });
  return {out.begin(), out.end()};
}

// ---- resources -------------------------------------------------------------

std::vector<HistoryRow> historyFromGraph(const Graph& g, const std::string& resource,
                                         std::string_view status) {
  const Term r = requireEntity(g, resource, "Resource", "resource");
  const query::Query q = query::parse(query::resourceHistoryQuery(r, status));
  const query::ResultTable table = query::evalSelect(g, std::get<query::SelectQuery>(q.body));
  std::vector<HistoryRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto number = [&](std::string_view var) {
      auto value = table.at(i, var).numeric();
      if (!value) {
        throw Error(ErrorCode::DomainViolation,
                    fmt::format("{} of {} is not numeric", var, table.at(i, "execution").canonical()));
      }
      return *value;
    };
    auto time = [&](std::string_view var) {
      auto value = table.at(i, var).dateTime();
      if (!value) {
        throw Error(ErrorCode::DomainViolation,
                    fmt::format("{} of {} is not a dateTime", var, table.at(i, "execution").canonical()));
      }
      return *value;
    };
    rows.push_back({kb::exLocal(table.at(i, "execution")), number("emissions"), number("energyCost"),
                    number("quality"), time("realStartTime"), time("realEndTime")});
  }
  std::sort(rows.begin(), rows.end(), [](const HistoryRow& a, const HistoryRow& b) {
    return std::tie(a.realStart, a.executionId) < std::tie(b.realStart, b.executionId);
  });
  return rows;
}

std::vector<HistoryRow> getResourceHistory(const kb::KnowledgeBase& kb, const std::string& resource,
                                           std::string_view status) {
  return kb.read([&](const Graph& g) { return historyFromGraph(g, resource, status); });
}

std::string resolvePlanInstance(const Graph& g, const std::string& resource, const std::string& plan) {
  const Term r = requireEntity(g, resource, "Resource", "resource");
  entity(plan, "process plan");
  const std::string pair = builder::planInstanceId(plan, resource);
  if (kb::isSafeLocalName(pair) && hasType(g, ex(pair), ex("ProcessPlan"))) return pair;
  if (hasType(g, ex(plan), ex("ProcessPlan")) && g.contains({r, ex("capableOf"), ex(plan)})) return plan;
  throw Error(ErrorCode::UnknownEntity,
              fmt::format("resource '{}' has no process plan '{}'", resource, plan));
}

Performance expectedPerformance(const kb::KnowledgeBase& kb, const std::string& resource,
                                const std::string& plan) {
  return kb.read([&](const Graph& g) {
    const std::string instance = resolvePlanInstance(g, resource, plan);
    const auto node = objectOf(g, ex(instance), ex("expectedPerformance"));
    auto perf = node ? performanceOf(g, *node) : std::nullopt;
    if (!perf) {
      throw Error(ErrorCode::UnknownEntity,
                  fmt::format("process plan '{}' has no expected performance", instance));
    }
    return *perf;
  });
}

Performance changeResourcePerformance(kb::KnowledgeBase& kb, const std::string& resource,
                                      const std::string& plan, const Performance& performance) {
  return kb.write([&](Graph& g) {
    const std::string instance = resolvePlanInstance(g, resource, plan);
    validatePerformance(performance);
    const Term planTerm = ex(instance);
    std::vector<Triple> removed;
    std::vector<Triple> added;
    Term node = ex(instance + "_expected");
    if (auto existing = objectOf(g, planTerm, ex("expectedPerformance"))) {
      node = *existing;
      for (const char* p : {"duration", "energyCost", "emissions", "quality"}) {
        for (Triple& t : g.match({node, ex(p), std::nullopt})) removed.push_back(std::move(t));
      }
    } else {
      added.push_back({planTerm, ex("expectedPerformance"), node});
      added.push_back({node, kb::rdf::type(), ex("Performance")});
    }
    for (Triple& t : performanceTriples(node, performance)) added.push_back(std::move(t));
    rewrite(g, planTerm, ex("ProcessPlan"), removed, added);
    return performance;
  });
}

// ---- OEE -------------------------------------------------------------------

OeeReport computeOee(const std::string& resource, SimMinute windowStart, SimMinute windowEnd,
                     const std::vector<OeeSample>& samples) {
  if (windowEnd <= windowStart) {
    throw Error(ErrorCode::EmptyWindow,
                fmt::format("window [{}, {}) is empty", kb::formatDateTime(windowStart),
                            kb::formatDateTime(windowEnd)));
  }
  OeeReport report;
  report.resource = resource;
  report.windowStart = windowStart;
  report.windowEnd = windowEnd;
  SimMinute busy = 0;
  SimMinute planned = 0;
  SimMinute real = 0;
  double qualitySum = 0;
  for (const OeeSample& s : samples) {
    const SimMinute overlap = std::min(s.realEnd, windowEnd) - std::max(s.realStart, windowStart);
    const bool instantInside =
        s.realStart == s.realEnd && s.realStart >= windowStart && s.realStart < windowEnd;
    if (overlap <= 0 && !instantInside) continue;
    busy += std::max<SimMinute>(overlap, 0);
    planned += s.plannedMinutes;
    real += s.realEnd - s.realStart;
    qualitySum += s.quality;
    ++report.executions;
  }
  report.uptime = std::min(1.0, static_cast<double>(busy) / static_cast<double>(windowEnd - windowStart));
  report.perfEfficiency = real > 0 ? static_cast<double>(planned) / static_cast<double>(real) : 1.0;
  report.qualityRate = report.executions > 0 ? qualitySum / static_cast<double>(report.executions) : 1.0;
  report.oee = report.uptime * std::min(report.perfEfficiency, 1.0) * report.qualityRate;
  return report;
}

OeeReport computeOee(const Graph& g, const std::string& resource, SimMinute windowStart,
                     SimMinute windowEnd) {
  std::vector<OeeSample> samples;
  for (const HistoryRow& row : historyFromGraph(g, resource)) {
    const auto e = findExecution(g, row.executionId);
    const SimMinute plannedMinutes = e ? e->plannedEnd - e->plannedStart : row.realEnd - row.realStart;
    samples.push_back({row.realStart, row.realEnd, plannedMinutes, row.quality.toDouble()});
  }
  return computeOee(resource, windowStart, windowEnd, samples);
}

OeeReport computeOee(const kb::KnowledgeBase& kb, const std::string& resource, SimMinute windowStart,
                     SimMinute windowEnd) {
  return kb.read([&](const Graph& g) { return computeOee(g, resource, windowStart, windowEnd); });
}

}  // namespace ontomas::runtime
