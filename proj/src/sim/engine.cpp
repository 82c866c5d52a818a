#include "ontomas/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <fmt/format.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/sim/product_agent.hpp"

namespace ontomas::sim {

using kb::Decimal;
using runtime::ExecStatus;

namespace {

// Declaration order is the tie-break priority at equal times.
enum class EventKind { ProcessDone, TransferDone, Arrival, PolicyTick };

std::string_view kindName(EventKind k) {
  switch (k) {
    case EventKind::ProcessDone: return "processDone";
    case EventKind::TransferDone: return "transferDone";
    case EventKind::Arrival: return "arrival";
    case EventKind::PolicyTick: return "policyTick";
  }
  return "";
}

struct Event {
  SimMinute time = 0;
  EventKind kind = EventKind::Arrival;
  std::string id;  // part for arrivals, robot, machine, or "RA"

  friend auto operator<=>(const Event&, const Event&) = default;
};

enum class TaskKind { Move, Load, Unload };

struct RobotTask {
  TaskKind kind = TaskKind::Move;
  std::string part;
  std::string machine;
};

enum class MachineState { Idle, Loading, Processing, Done };

struct Machine {
  MachineState state = MachineState::Idle;
  std::string part;
  SimMinute doneAt = 0;
};

struct PartInfo {
  std::string execution;
  std::string machine;
  std::string plan;
  SimMinute plannedStart = 0;
  SimMinute plannedMinutes = 0;
};

struct Template {
  std::vector<std::string> features;
  SimMinute deadlineOffset = 0;
  std::vector<builder::Coefficient> objective;
};

Template readTemplate(const kb::KnowledgeBase& kb, const Scenario& scenario, std::string& name) {
  return kb.read([&](const kb::Graph& g) {
    if (scenario.productTemplate) {
      name = *scenario.productTemplate;
    } else {
      const auto products = runtime::instancesOf(g, "Product");
      if (products.empty()) throw Error(ErrorCode::ConfigError, "the KB holds no product to use as part template");
      name = products.front();
    }
    if (!kb::isSafeLocalName(name) || !g.contains({kb::ex(name), kb::rdf::type(), kb::ex("Product")})) {
      throw Error(ErrorCode::ConfigError, fmt::format("template product '{}' is not in the KB", name));
    }
    Template t;
    for (const kb::Triple& f : g.match({kb::ex(name), kb::ex("defines"), std::nullopt})) {
      t.features.push_back(kb::exLocal(f.object));
    }
    const auto deadline = g.match({kb::ex(name), kb::ex("deadline"), std::nullopt});
    if (deadline.empty() || !deadline.front().object.dateTime()) {
      throw Error(ErrorCode::ConfigError, fmt::format("template product '{}' has no deadline", name));
    }
    t.deadlineOffset = *deadline.front().object.dateTime();
    t.objective = runtime::objectiveOf(g, name);
    return t;
  });
}

class Simulation {
 public:
  Simulation(kb::KnowledgeBase& kb, const Scenario& scenario) : kb_(kb), scenario_(scenario) {}

  SimResult run() {
    tmpl_ = readTemplate(kb_, scenario_, templateName_);
    for (const std::string& m : kb_.read([](const kb::Graph& g) { return runtime::instancesOf(g, "Machine"); })) {
      machines_[m];
    }
    result_.initialFleetEnergy = kb_.read([](const kb::Graph& g) { return fleetEnergy(g); });
    result_.maxFleetEnergy = result_.initialFleetEnergy;

    for (std::size_t i = 0; i < scenario_.arrivals.size(); ++i) {
      if (scenario_.arrivals[i] >= scenario_.horizon) continue;
      queue_.insert({scenario_.arrivals[i], EventKind::Arrival, fmt::format("{}{:04d}", templateName_, i + 1)});
    }
    const SimMinute window = scenario_.policy.evaluationWindowMin;
    if (window < scenario_.horizon) queue_.insert({window, EventKind::PolicyTick, "RA"});

    while (!queue_.empty() && queue_.begin()->time < scenario_.horizon) {
      const Event e = *queue_.begin();
      queue_.erase(queue_.begin());
      now_ = e.time;
      handle(e);
      dispatch();
      checkConservation();
    }

    result_.oee = kb_.read([&](const kb::Graph& g) { return oeeReportSeries(g, window, scenario_.horizon); });
    result_.finalFleet = kb_.read([](const kb::Graph& g) { return observeFleet(g, 0, 0); });
    return std::move(result_);
  }

 private:
  void trace(std::string event, std::string entity, std::string detail) {
    result_.trace.push_back({now_, std::move(event), std::move(entity), std::move(detail)});
  }

  void schedule(SimMinute at, EventKind kind, std::string id) { queue_.insert({at, kind, std::move(id)}); }

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::Arrival: arrive(e.id); break;
      case EventKind::TransferDone: transferDone(e.id); break;
      case EventKind::ProcessDone: processDone(e.id); break;
      case EventKind::PolicyTick: policyTick(); break;
    }
  }

  void arrive(const std::string& part) {
    runtime::registerProduct(kb_, {part, tmpl_.features, now_ + tmpl_.deadlineOffset, tmpl_.objective});
    b1_.push_back(part);
    ++result_.entered;
    trace(std::string(kindName(EventKind::Arrival)), part, "B1");
  }

  void transferDone(const std::string& robot) {
    RobotTask task = *robots_[robot];
    robots_[robot].reset();
    switch (task.kind) {
      case TaskKind::Move: {
        trace("transferDone", robot, fmt::format("{} B1->B2", task.part));
        b2_.push_back(task.part);
        plan(task.part);
        break;
      }
      case TaskKind::Load: {
        trace("transferDone", robot, fmt::format("{} B2->{}", task.part, task.machine));
        PartInfo& info = parts_.at(task.part);
        runtime::updateExecutionData(kb_, info.execution,
                                     {ExecStatus::Running, now_, std::nullopt, task.machine, std::nullopt, std::nullopt});
        Machine& m = machines_.at(task.machine);
        m.state = MachineState::Processing;
        m.part = task.part;
        schedule(now_ + info.plannedMinutes, EventKind::ProcessDone, task.machine);
        trace("running", info.execution, fmt::format("{} on {}", task.part, task.machine));
        break;
      }
      case TaskKind::Unload: {
        trace("transferDone", robot, fmt::format("{} {}->B3", task.part, task.machine));
        result_.exits[task.part] = now_;
        ++exited_;
        trace("exit", task.part, "B3");
        break;
      }
    }
  }

  // The part's agent picks a machine from what the KB offers and records the
  // plan. Loading starts one transfer after the machine is expected free.
  void plan(const std::string& part) {
    const MachineChoice choice = paSelectMachine(kb_, part, now_);
    const auto minutes = static_cast<SimMinute>(std::ceil(choice.expected.durationMin.toDouble()));
    const SimMinute start = choice.completion - minutes + scenario_.transferMinutes;
    const std::string execution =
        runtime::addPlannedExecutionData(kb_, part, choice.plan, start, start + minutes, choice.machine);
    parts_[part] = {execution, choice.machine, choice.plan, start, minutes};
    trace("planned", execution,
          fmt::format("{} on {} plan {} window {}..{}", part, choice.machine, choice.plan, start, start + minutes));
  }

  void processDone(const std::string& machine) {
    Machine& m = machines_.at(machine);
    const PartInfo& info = parts_.at(m.part);
    Performance real = runtime::expectedPerformance(kb_, machine, info.plan);
    real.durationMin = Decimal(info.plannedMinutes);
    runtime::updateExecutionData(kb_, info.execution,
                                 {ExecStatus::Successful, std::nullopt, now_, std::nullopt, real, std::nullopt});
    m.state = MachineState::Done;
    m.doneAt = now_;
    trace("processDone", machine, fmt::format("{} {}", m.part, info.execution));
  }

  void policyTick() {
    const SimMinute window = scenario_.policy.evaluationWindowMin;
    // Silent when nothing changes, so an idle plant leaves an empty trace.
    try {
      const auto adjustments = raEvaluateAndAdjust(kb_, scenario_.policy, now_ - window, now_);
      if (!adjustments.empty()) trace("policyTick", "RA", fmt::format("window {}..{}", now_ - window, now_));
      for (const Adjustment& a : adjustments) {
        const Decimal fleet = kb_.read([](const kb::Graph& g) { return fleetEnergy(g); });
        result_.maxFleetEnergy = std::max(result_.maxFleetEnergy, fleet);
        result_.adjustments.push_back({now_, a, fleet});
        trace("adjust", a.machine,
              fmt::format("{} duration {}->{} energyKwh {}->{}", a.plan, a.before.durationMin.toString(),
                          a.after.durationMin.toString(), a.before.energyKwh.toString(),
                          a.after.energyKwh.toString()));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetInfeasible) throw;
      trace("policyTick", "RA", fmt::format("window {}..{}", now_ - window, now_));
      trace("infeasible", "RA", e.what());
    }
    if (now_ + window < scenario_.horizon) schedule(now_ + window, EventKind::PolicyTick, "RA");
  }

  void dispatch() {
    std::optional<RobotTask>& r1 = robots_["R1"];
    if (!r1 && !b1_.empty() && (!scenario_.b2Capacity || b2_.size() < *scenario_.b2Capacity)) {
      r1 = RobotTask{TaskKind::Move, b1_.front(), {}};
      b1_.pop_front();
      schedule(now_ + scenario_.transferMinutes, EventKind::TransferDone, "R1");
    }

    std::optional<RobotTask>& r2 = robots_["R2"];
    if (r2) return;
    // Unloading first: a finished machine is blocked until emptied.
    std::optional<std::pair<SimMinute, std::string>> unload;
    for (const auto& [id, m] : machines_) {
      if (m.state == MachineState::Done && (!unload || std::pair(m.doneAt, id) < *unload)) unload = {m.doneAt, id};
    }
    if (unload) {
      Machine& m = machines_.at(unload->second);
      r2 = RobotTask{TaskKind::Unload, m.part, unload->second};
      m.state = MachineState::Idle;
      m.part.clear();
      schedule(now_ + scenario_.transferMinutes, EventKind::TransferDone, "R2");
      return;
    }
    std::optional<std::size_t> load;
    for (std::size_t i = 0; i < b2_.size(); ++i) {
      const PartInfo& p = parts_.at(b2_[i]);
      if (machines_.at(p.machine).state != MachineState::Idle) continue;
      if (!load) {
        load = i;
        continue;
      }
      const PartInfo& best = parts_.at(b2_[*load]);
      if (std::tie(p.plannedStart, p.execution) < std::tie(best.plannedStart, best.execution)) load = i;
    }
    if (load) {
      const std::string part = b2_[*load];
      b2_.erase(b2_.begin() + static_cast<std::ptrdiff_t>(*load));
      const std::string& machine = parts_.at(part).machine;
      machines_.at(machine).state = MachineState::Loading;
      r2 = RobotTask{TaskKind::Load, part, machine};
      schedule(now_ + scenario_.transferMinutes, EventKind::TransferDone, "R2");
    }
  }

  // entered = exited + in flight, where in flight counts B1, B2, both robot
  // hands and every machine holding a part.
  void checkConservation() const {
    std::size_t inFlight = b1_.size() + b2_.size();
    for (const auto& [id, task] : robots_) inFlight += task ? 1 : 0;
    for (const auto& [id, m] : machines_) {
      inFlight += (m.state == MachineState::Processing || m.state == MachineState::Done) ? 1 : 0;
    }
    if (result_.entered != exited_ + inFlight) {
      throw std::logic_error(fmt::format("conservation broken at t={}: {} entered, {} exited, {} in flight",
                                         now_, result_.entered, exited_, inFlight));
    }
  }

  kb::KnowledgeBase& kb_;
  const Scenario& scenario_;
  std::string templateName_;
  Template tmpl_;
  SimMinute now_ = 0;
  std::set<Event> queue_;
  std::deque<std::string> b1_;
  std::vector<std::string> b2_;
  std::map<std::string, std::optional<RobotTask>> robots_{{"R1", std::nullopt}, {"R2", std::nullopt}};
  std::map<std::string, Machine> machines_;
  std::map<std::string, PartInfo> parts_;
  std::size_t exited_ = 0;
  SimResult result_;
};

}  // namespace

SimResult runScenario(kb::KnowledgeBase& kb, const Scenario& scenario) {
  validatePolicy(scenario.policy);
  if (scenario.horizon <= 0) throw Error(ErrorCode::ConfigError, "horizon must be positive");
  if (!std::is_sorted(scenario.arrivals.begin(), scenario.arrivals.end())) {
    throw Error(ErrorCode::ConfigError, "arrivals must be sorted");
  }
  return Simulation(kb, scenario).run();
}

std::vector<runtime::OeeReport> oeeReportSeries(const kb::Graph& g, SimMinute window, SimMinute horizon) {
  if (window <= 0) throw Error(ErrorCode::ConfigError, "evaluation window must be positive");
  std::vector<runtime::OeeReport> out;
  const auto machines = runtime::instancesOf(g, "Machine");
  for (SimMinute start = 0; start < horizon; start += window) {
    for (const std::string& m : machines) {
      out.push_back(runtime::computeOee(g, m, start, std::min(start + window, horizon)));
    }
  }
  return out;
}

std::string renderTrace(const std::vector<TraceRecord>& trace) {
  std::string out = "time\tevent\tentity\tdetail\n";
  for (const TraceRecord& r : trace) out += fmt::format("{}\t{}\t{}\t{}\n", r.time, r.event, r.entity, r.detail);
  return out;
}

std::string renderOeeCsv(const std::vector<runtime::OeeReport>& reports) {
  std::string out = "windowStart,windowEnd,resource,executions,uptime,perfEfficiency,qualityRate,oee\n";
  for (const runtime::OeeReport& r : reports) {
    out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.windowStart, r.windowEnd, r.resource,
                       r.executions, r.uptime, r.perfEfficiency, r.qualityRate, r.oee);
  }
  return out;
}

}  // namespace ontomas::sim
