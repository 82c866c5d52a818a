#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontomas/kb/decimal.hpp"
#include "ontomas/kb/graph.hpp"
#include "ontomas/kb/sim_time.hpp"
#include "ontomas/performance.hpp"

namespace ontomas::builder {

enum class ResourceKind { Machine, Robot, Buffer };

std::string_view resourceKindName(ResourceKind kind);
std::optional<ResourceKind> resourceKindFromName(std::string_view name);

struct ResourceSpec {
  std::string id;
  ResourceKind kind = ResourceKind::Machine;
  std::vector<std::string> capableOf;  // logical plan ids

  friend bool operator==(const ResourceSpec&, const ResourceSpec&) = default;
};

// One processes.csv row. Rows sharing `id` describe the same logical plan
// executed on different machines.
struct ProcessPlanSpec {
  std::string id;
  std::string realizes;
  std::optional<std::string> machine;
  Performance expected;

  friend bool operator==(const ProcessPlanSpec&, const ProcessPlanSpec&) = default;
};

struct FeatureSpec {
  std::string id;
  std::string description;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct Coefficient {
  std::string metric;
  kb::Decimal value;

  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

struct ProductSpec {
  std::string id;
  std::vector<std::string> features;
  kb::SimMinute deadline = 0;
  std::vector<Coefficient> coefficients;

  friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

struct PlantDescription {
  std::vector<ResourceSpec> resources;
  std::vector<ProcessPlanSpec> processPlans;
  std::vector<FeatureSpec> features;
  std::vector<ProductSpec> products;

  friend bool operator==(const PlantDescription&, const PlantDescription&) = default;
};

inline constexpr const char* kResourcesCsv = "resources.csv";
inline constexpr const char* kProcessesCsv = "processes.csv";
inline constexpr const char* kFeaturesCsv = "features.csv";
inline constexpr const char* kProductsCsv = "products.csv";

// File name -> file content.
using CsvBundle = std::map<std::string, std::string>;

// Parses and validates the four files:
//   resources.csv  id,kind,capableOf            (capableOf is ';'-separated)
//   processes.csv  id,realizes,machine,durationMin,energyKwh,emissions,quality
//   features.csv   id,description
//   products.csv   id,features,deadline,objective   (objective: metric=value;...)
//
// Throws Error(CsvSyntaxError) for a missing file, a bad header or a wrong
// field count; Error(DanglingReference) for an id that resolves nowhere;
// Error(DomainViolation) for an out-of-range or malformed value. All carry the
// file name and line.
PlantDescription parseCsvBundle(const CsvBundle& files);

// Reads the four files from a directory, then parseCsvBundle.
PlantDescription loadCsvDirectory(const std::filesystem::path& dir);

// Inverse of parseCsvBundle: parseCsvBundle(render(pd)) == pd.
CsvBundle render(const PlantDescription& plant);

// Local name of the ProcessPlan node carrying a row's expected performance:
// "<plan>_<machine>", or "<plan>" for a row without a machine.
std::string planInstanceId(const ProcessPlanSpec& row);
std::string planInstanceId(std::string_view plan, std::string_view machine);

// Writes the plant into the ABox. Every subject the description generates is
// first cleared, so building the same description twice is a no-op and a
// changed description replaces the old statements about those subjects.
void buildAbox(kb::Graph& graph, const PlantDescription& plant);

}  // namespace ontomas::builder
