#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontomas/kb/decimal.hpp"
#include "ontomas/kb/sim_time.hpp"
#include "ontomas/sim/policy.hpp"

namespace ontomas::sim {

using kb::SimMinute;

// A flat reading of a TOML-style file: `key = value` lines, `[section]`
// headers that prefix later keys with "section.", `#` comments. Values are
// quoted strings, numbers, true/false, or one-line arrays of numbers. Nothing
// else of TOML is accepted.
class ConfigFile {
 public:
  // Throws Error(ConfigError) with file and line.
  static ConfigFile parse(std::string_view text, std::string fileName = {});

  [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
  [[nodiscard]] std::vector<std::string> keys() const;

  // Each accessor returns nullopt for an absent key and throws ConfigError
  // when the value has the wrong shape.
  [[nodiscard]] std::optional<std::string> string(const std::string& key) const;
  [[nodiscard]] std::optional<std::int64_t> integer(const std::string& key) const;
  [[nodiscard]] std::optional<kb::Decimal> decimal(const std::string& key) const;
  [[nodiscard]] std::optional<std::vector<std::int64_t>> integers(const std::string& key) const;

  // Throws ConfigError naming the first key outside `known`.
  void rejectUnknown(const std::set<std::string>& known) const;

 private:
  enum class Kind { String, Number, Boolean, Array };
  struct Value {
    Kind kind = Kind::String;
    std::string text;
    std::vector<std::string> items;
    std::size_t line = 0;
  };

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  const Value* find(const std::string& key) const;

  std::string fileName_;
  std::map<std::string, Value> values_;
};

struct Scenario {
  std::vector<SimMinute> arrivals;  // sorted
  SimMinute transferMinutes = 1;
  std::optional<std::size_t> b2Capacity;  // nullopt: unbounded
  SimMinute horizon = 1000;
  // Product whose features, deadline offset and objective every arriving
  // part copies. Defaults to the first product in the KB.
  std::optional<std::string> productTemplate;
  PolicyConfig policy;
};

// Keys (all optional):
//   horizon, transfer_minutes, b2_capacity, product_template
//   arrivals.times = [..]            explicit minutes, or
//   arrivals.mean_minutes, arrivals.seed, arrivals.first
//   policy.uptime_threshold, policy.energy_budget_kwh, policy.trade_rate,
//   policy.evaluation_window_min, policy.speed_up_steps_cap
// Throws Error(ConfigError).
Scenario parseScenario(std::string_view text, const std::string& fileName = {});
Scenario loadScenario(const std::string& path);

// Arrival minutes in [first, horizon): one at `first`, then exponential
// gaps of the given mean, drawn by inverse CDF from a seeded mt19937_64.
// Cumulative gaps are floored to whole minutes, so parts can share a minute.
std::vector<SimMinute> exponentialArrivals(std::uint64_t seed, double meanMinutes, SimMinute first,
                                           SimMinute horizon);

}  // namespace ontomas::sim
