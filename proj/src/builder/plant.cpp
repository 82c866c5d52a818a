#include "ontomas/builder/plant.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ontomas/builder/csv.hpp"
#include "ontomas/error.hpp"
#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::builder {

using kb::Decimal;
using kb::ex;
using kb::Term;

std::string_view resourceKindName(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::Machine: return "machine";
    case ResourceKind::Robot: return "robot";
    case ResourceKind::Buffer: return "buffer";
  }
  return "machine";
}

std::optional<ResourceKind> resourceKindFromName(std::string_view name) {
  if (name == "machine") return ResourceKind::Machine;
  if (name == "robot") return ResourceKind::Robot;
  if (name == "buffer") return ResourceKind::Buffer;
  return std::nullopt;
}

std::string planInstanceId(std::string_view plan, std::string_view machine) {
  return fmt::format("{}_{}", plan, machine);
}

std::string planInstanceId(const ProcessPlanSpec& row) {
  return row.machine ? planInstanceId(row.id, *row.machine) : row.id;
}

namespace {

const std::vector<std::string> kResourceHeader = {"id", "kind", "capableOf"};
const std::vector<std::string> kProcessHeader = {"id",        "realizes",  "machine", "durationMin",
                                                 "energyKwh", "emissions", "quality"};
const std::vector<std::string> kFeatureHeader = {"id", "description"};
const std::vector<std::string> kProductHeader = {"id", "features", "deadline", "objective"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> splitList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

std::string joinList(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out.push_back(';');
    out += item;
  }
  return out;
}

struct Where {
  std::string file;
  std::size_t line = 0;

  [[noreturn]] void fail(ErrorCode code, const std::string& message) const {
    throw Error(code, message, SourcePosition{file, line, 0});
  }
};

// Data rows of one file, header checked and removed.
std::vector<CsvRow> readTable(const CsvBundle& files, const std::string& name,
                              const std::vector<std::string>& header) {
  const auto it = files.find(name);
  if (it == files.end()) {
    throw Error(ErrorCode::CsvSyntaxError, "missing file " + name, SourcePosition{name, 0, 0});
  }
  std::vector<CsvRow> rows = parseCsv(it->second, name);
  if (rows.empty()) {
    throw Error(ErrorCode::CsvSyntaxError, "empty file, expected a header row",
                SourcePosition{name, 1, 0});
  }
  std::vector<std::string> got;
  for (const auto& f : rows.front().fields) got.push_back(trim(f));
  if (got != header) {
    Where{name, rows.front().line}.fail(
        ErrorCode::CsvSyntaxError,
        fmt::format("expected header '{}'", fmt::join(header, ",")));
  }
  rows.erase(rows.begin());
  for (const CsvRow& row : rows) {
    if (row.fields.size() != header.size()) {
      Where{name, row.line}.fail(ErrorCode::CsvSyntaxError,
                                 fmt::format("expected {} fields, found {}", header.size(),
                                             row.fields.size()));
    }
  }
  return rows;
}

void checkId(const Where& where, const std::string& id, std::string_view field) {
  if (!kb::isSafeLocalName(id)) {
    where.fail(ErrorCode::DomainViolation,
               fmt::format("{}: '{}' is not a valid identifier (letters, digits, '_', '-')", field, id));
  }
}

Decimal decimalField(const Where& where, const std::string& text, std::string_view field) {
  auto value = Decimal::parse(trim(text));
  if (!value) where.fail(ErrorCode::DomainViolation, fmt::format("{}: '{}' is not a number", field, text));
  return *value;
}

class BundleParser {
 public:
  explicit BundleParser(const CsvBundle& files) : files_(files) {}

  PlantDescription parse() {
    parseFeatures();
    parseResources();
    parseProcesses();
    parseProducts();
    resolveReferences();
    return std::move(plant_);
  }

 private:
  void claimId(const Where& where, const std::string& id) {
    if (!ids_.insert(id).second) {
      where.fail(ErrorCode::DomainViolation, fmt::format("id: '{}' is declared twice", id));
    }
  }

  void parseFeatures() {
    for (const CsvRow& row : readTable(files_, kFeaturesCsv, kFeatureHeader)) {
      const Where where{kFeaturesCsv, row.line};
      FeatureSpec f{trim(row.fields[0]), row.fields[1]};
      checkId(where, f.id, "id");
      claimId(where, f.id);
      plant_.features.push_back(std::move(f));
    }
  }

  void parseResources() {
    for (const CsvRow& row : readTable(files_, kResourcesCsv, kResourceHeader)) {
      const Where where{kResourcesCsv, row.line};
      ResourceSpec r;
      r.id = trim(row.fields[0]);
      checkId(where, r.id, "id");
      claimId(where, r.id);
      const std::string kind = trim(row.fields[1]);
      auto parsed = resourceKindFromName(kind);
      if (!parsed) {
        where.fail(ErrorCode::DomainViolation,
                   fmt::format("kind: '{}' is not one of machine, robot, buffer", kind));
      }
      r.kind = *parsed;
      r.capableOf = splitList(row.fields[2]);
      resourceLines_.push_back(row.line);
      plant_.resources.push_back(std::move(r));
    }
  }

  void parseProcesses() {
    std::map<std::string, std::string> realizesByPlan;
    std::set<std::string> pairs;
    for (const CsvRow& row : readTable(files_, kProcessesCsv, kProcessHeader)) {
      const Where where{kProcessesCsv, row.line};
      ProcessPlanSpec p;
      p.id = trim(row.fields[0]);
      checkId(where, p.id, "id");
      p.realizes = trim(row.fields[1]);
      checkId(where, p.realizes, "realizes");
      if (std::string machine = trim(row.fields[2]); !machine.empty()) {
        checkId(where, machine, "machine");
        p.machine = std::move(machine);
      }
      p.expected.durationMin = decimalField(where, row.fields[3], "durationMin");
      p.expected.energyKwh = decimalField(where, row.fields[4], "energyKwh");
      p.expected.emissions = decimalField(where, row.fields[5], "emissions");
      p.expected.quality = decimalField(where, row.fields[6], "quality");
      try {
        validatePerformance(p.expected);
      } catch (const Error& e) {
        where.fail(e.code(), e.what());
      }

      auto [it, fresh] = realizesByPlan.emplace(p.id, p.realizes);
      if (fresh) {
        if (ids_.contains(p.id)) claimId(where, p.id);  // collides with another entity
      } else if (it->second != p.realizes) {
        where.fail(ErrorCode::DomainViolation,
                   fmt::format("realizes: plan '{}' already realizes '{}'", p.id, it->second));
      }
      if (!pairs.insert(planInstanceId(p)).second) {
        where.fail(ErrorCode::DomainViolation,
                   fmt::format("machine: plan '{}' has two rows for {}", p.id,
                               p.machine ? "'" + *p.machine + "'" : "no machine"));
      }
      processLines_.push_back(row.line);
      plant_.processPlans.push_back(std::move(p));
    }
    for (const auto& [id, realizes] : realizesByPlan) ids_.insert(id);
    for (std::size_t i = 0; i < plant_.processPlans.size(); ++i) {
      const ProcessPlanSpec& p = plant_.processPlans[i];
      if (p.machine && ids_.contains(planInstanceId(p))) {
        Where{kProcessesCsv, processLines_[i]}.fail(
            ErrorCode::DomainViolation,
            fmt::format("id: generated plan id '{}' collides with a declared id", planInstanceId(p)));
      }
    }
  }

  void parseProducts() {
    for (const CsvRow& row : readTable(files_, kProductsCsv, kProductHeader)) {
      const Where where{kProductsCsv, row.line};
      ProductSpec p;
      p.id = trim(row.fields[0]);
      checkId(where, p.id, "id");
      claimId(where, p.id);
      p.features = splitList(row.fields[1]);
      const std::string deadline = trim(row.fields[2]);
      auto minute = kb::parseDateTime(deadline);
      if (!minute) {
        where.fail(ErrorCode::DomainViolation,
                   fmt::format("deadline: '{}' is not an ISO-8601 UTC minute (YYYY-MM-DDTHH:MMZ)", deadline));
      }
      p.deadline = *minute;
      for (const std::string& term : splitList(row.fields[3])) {
        const auto eq = term.find('=');
        if (eq == std::string::npos) {
          where.fail(ErrorCode::DomainViolation, fmt::format("objective: '{}' is not metric=value", term));
        }
        Coefficient c{trim(std::string_view(term).substr(0, eq)),
                      decimalField(where, term.substr(eq + 1), "objective")};
        checkId(where, c.metric, "objective");
        const bool repeated = std::any_of(p.coefficients.begin(), p.coefficients.end(),
                                          [&](const Coefficient& o) { return o.metric == c.metric; });
        if (repeated) {
          where.fail(ErrorCode::DomainViolation, fmt::format("objective: metric '{}' repeated", c.metric));
        }
        p.coefficients.push_back(std::move(c));
      }
      if (p.coefficients.empty()) {
        where.fail(ErrorCode::DomainViolation, "objective: at least one metric=value is required");
      }
      productLines_.push_back(row.line);
      plant_.products.push_back(std::move(p));
    }
  }

  void resolveReferences() {
    std::set<std::string> features;
    for (const auto& f : plant_.features) features.insert(f.id);
    std::set<std::string> resources;
    for (const auto& r : plant_.resources) resources.insert(r.id);
    std::set<std::string> plans;
    std::set<std::string> instances;
    for (const auto& p : plant_.processPlans) {
      plans.insert(p.id);
      instances.insert(planInstanceId(p));
    }

    for (std::size_t i = 0; i < plant_.processPlans.size(); ++i) {
      const ProcessPlanSpec& p = plant_.processPlans[i];
      const Where where{kProcessesCsv, processLines_[i]};
      if (!features.contains(p.realizes)) {
        where.fail(ErrorCode::DanglingReference,
                   fmt::format("realizes: unknown feature '{}'", p.realizes));
      }
      if (p.machine && !resources.contains(*p.machine)) {
        where.fail(ErrorCode::DanglingReference,
                   fmt::format("machine: unknown resource '{}'", *p.machine));
      }
    }
    for (std::size_t i = 0; i < plant_.resources.size(); ++i) {
      const ResourceSpec& r = plant_.resources[i];
      const Where where{kResourcesCsv, resourceLines_[i]};
      for (const std::string& plan : r.capableOf) {
        if (!plans.contains(plan)) {
          where.fail(ErrorCode::DanglingReference,
                     fmt::format("capableOf: unknown process plan '{}'", plan));
        }
        if (!instances.contains(planInstanceId(plan, r.id)) && !instances.contains(plan)) {
          where.fail(ErrorCode::DanglingReference,
                     fmt::format("capableOf: processes.csv has no row for '{}' on '{}'", plan, r.id));
        }
      }
    }
    for (std::size_t i = 0; i < plant_.products.size(); ++i) {
      const Where where{kProductsCsv, productLines_[i]};
      for (const std::string& f : plant_.products[i].features) {
        if (!features.contains(f)) {
          where.fail(ErrorCode::DanglingReference, fmt::format("features: unknown feature '{}'", f));
        }
      }
    }
  }

  const CsvBundle& files_;
  PlantDescription plant_;
  std::set<std::string> ids_;
  std::vector<std::size_t> resourceLines_;
  std::vector<std::size_t> processLines_;
  std::vector<std::size_t> productLines_;
};

Term kindClass(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::Machine: return ex("Machine");
    case ResourceKind::Robot: return ex("Robot");
    case ResourceKind::Buffer: return ex("Buffer");
  }
  return ex("Resource");
}

// Predicates whose values on generated subjects are owned by the builder.
const std::vector<Term>& builderPredicates() {
  static const std::vector<Term> predicates = {
      kb::rdf::type(),        ex("capableOf"),   ex("realizes"),       ex("description"),
      ex("expectedPerformance"), ex("duration"), ex("energyCost"),     ex("emissions"),
      ex("quality"),          ex("defines"),     ex("deadline"),       ex("hasObjectiveFunction"),
      ex("hasCoefficient"),   ex("coefficientFor"), ex("hasValue"),
  };
  return predicates;
}

}  // namespace

PlantDescription parseCsvBundle(const CsvBundle& files) { return BundleParser(files).parse(); }

PlantDescription loadCsvDirectory(const std::filesystem::path& dir) {
  CsvBundle files;
  for (const char* name : {kResourcesCsv, kProcessesCsv, kFeaturesCsv, kProductsCsv}) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) continue;  // reported by parseCsvBundle as a missing file
    std::ostringstream text;
    text << in.rdbuf();
    files[name] = text.str();
  }
  return parseCsvBundle(files);
}

CsvBundle render(const PlantDescription& plant) {
  CsvBundle out;
  std::vector<std::vector<std::string>> rows{kResourceHeader};
  for (const auto& r : plant.resources) {
    rows.push_back({r.id, std::string(resourceKindName(r.kind)), joinList(r.capableOf)});
  }
  out[kResourcesCsv] = renderCsv(rows);

  rows = {kProcessHeader};
  for (const auto& p : plant.processPlans) {
    rows.push_back({p.id, p.realizes, p.machine.value_or(""), p.expected.durationMin.toString(),
                    p.expected.energyKwh.toString(), p.expected.emissions.toString(),
                    p.expected.quality.toString()});
  }
  out[kProcessesCsv] = renderCsv(rows);

  rows = {kFeatureHeader};
  for (const auto& f : plant.features) rows.push_back({f.id, f.description});
  out[kFeaturesCsv] = renderCsv(rows);

  rows = {kProductHeader};
  for (const auto& p : plant.products) {
    std::vector<std::string> terms;
    for (const auto& c : p.coefficients) terms.push_back(c.metric + "=" + c.value.toString());
    rows.push_back({p.id, joinList(p.features), kb::formatDateTime(p.deadline), joinList(terms)});
  }
  out[kProductsCsv] = renderCsv(rows);
  return out;
}

void buildAbox(kb::Graph& graph, const PlantDescription& plant) {
  std::vector<kb::Triple> triples;
  std::set<Term> subjects;
  auto add = [&](const Term& s, const Term& p, const Term& o) {
    subjects.insert(s);
    triples.push_back({s, p, o});
  };
  auto addPerformance = [&](const Term& node, const Performance& perf) {
    add(node, kb::rdf::type(), ex("Performance"));
    add(node, ex("duration"), Term::decimal(perf.durationMin));
    add(node, ex("energyCost"), Term::decimal(perf.energyKwh));
    add(node, ex("emissions"), Term::decimal(perf.emissions));
    add(node, ex("quality"), Term::decimal(perf.quality));
  };

  for (const auto& f : plant.features) {
    add(ex(f.id), kb::rdf::type(), ex("Feature"));
    add(ex(f.id), ex("description"), Term::string(f.description));
  }

  std::set<std::string> instances;
  for (const auto& p : plant.processPlans) {
    instances.insert(planInstanceId(p));
    add(ex(p.id), kb::rdf::type(), ex("ProcessPlan"));
    add(ex(p.id), ex("realizes"), ex(p.realizes));
    const std::string instance = planInstanceId(p);
    const Term node = ex(instance);
    if (p.machine) {
      add(node, kb::rdf::type(), ex("ProcessPlan"));
      add(node, ex("realizes"), ex(p.realizes));
    }
    const Term perf = ex(instance + "_expected");
    add(node, ex("expectedPerformance"), perf);
    addPerformance(perf, p.expected);
  }

  for (const auto& r : plant.resources) {
    add(ex(r.id), kb::rdf::type(), kindClass(r.kind));
    for (const std::string& plan : r.capableOf) {
      const std::string pair = planInstanceId(plan, r.id);
      add(ex(r.id), ex("capableOf"), ex(instances.contains(pair) ? pair : plan));
    }
  }

  for (const auto& p : plant.products) {
    const Term product = ex(p.id);
    add(product, kb::rdf::type(), ex("Product"));
    for (const std::string& f : p.features) add(product, ex("defines"), ex(f));
    add(product, ex("deadline"), Term::dateTime(p.deadline));
    const Term objective = ex(p.id + "_objective");
    add(product, ex("hasObjectiveFunction"), objective);
    add(objective, kb::rdf::type(), ex("ObjectiveFunction"));
    for (const auto& c : p.coefficients) {
      const Term coefficient = ex(p.id + "_objective_" + c.metric);
      add(objective, ex("hasCoefficient"), coefficient);
      add(coefficient, kb::rdf::type(), ex("Coefficient"));
      add(coefficient, ex("coefficientFor"), Term::string(c.metric));
      add(coefficient, ex("hasValue"), Term::decimal(c.value));
    }
  }

  for (const Term& s : subjects) {
    for (const Term& p : builderPredicates()) graph.remove({s, p, std::nullopt});
  }
  for (const auto& t : triples) graph.insert(t);
}

}  // namespace ontomas::builder
