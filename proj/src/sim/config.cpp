#include "ontomas/sim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "ontomas/error.hpp"

namespace ontomas::sim {

using kb::Decimal;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool isBareKey(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// A '#' outside a quoted string starts a comment.
std::string_view stripComment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool isNumber(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return Decimal::parse(s).has_value();
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::string fileName) {
  ConfigFile file;
  file.fileName_ = std::move(fileName);
  auto error = [&](std::size_t line, const std::string& message) {
    return Error(ErrorCode::ConfigError, message, SourcePosition{file.fileName_, line, 0});
  };
  std::string section;
  std::size_t lineNo = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineNo;
    const std::string_view line = trim(stripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || !isBareKey(trim(line.substr(1, line.size() - 2)))) {
        throw error(lineNo, fmt::format("malformed section header '{}'", line));
      }
      section = std::string(trim(line.substr(1, line.size() - 2))) + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw error(lineNo, fmt::format("expected 'key = value', got '{}'", line));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view rhs = trim(line.substr(eq + 1));
    if (!isBareKey(key)) throw error(lineNo, fmt::format("invalid key '{}'", key));
    if (rhs.empty()) throw error(lineNo, fmt::format("missing value for '{}'", key));

    Value v;
    v.line = lineNo;
    if (rhs.front() == '"') {
      if (rhs.size() < 2 || rhs.back() != '"') throw error(lineNo, "unterminated string");
      const std::string_view body = rhs.substr(1, rhs.size() - 2);
      if (body.find('"') != std::string_view::npos || body.find('\\') != std::string_view::npos) {
        throw error(lineNo, "escapes and embedded quotes are not supported in strings");
      }
      v.kind = Kind::String;
      v.text = std::string(body);
    } else if (rhs.front() == '[') {
      if (rhs.back() != ']') throw error(lineNo, "arrays must open and close on one line");
      v.kind = Kind::Array;
      std::string_view body = trim(rhs.substr(1, rhs.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        const std::string_view item = trim(body.substr(0, comma));
        if (!isNumber(item)) throw error(lineNo, fmt::format("array item '{}' is not a number", item));
        v.items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
        if (body.empty()) break;  // trailing comma
      }
    } else if (rhs == "true" || rhs == "false") {
      v.kind = Kind::Boolean;
      v.text = std::string(rhs);
    } else if (isNumber(rhs)) {
      v.kind = Kind::Number;
      v.text = std::string(rhs);
    } else {
      throw error(lineNo, fmt::format("cannot read value '{}'", rhs));
    }
    const std::string full = section + std::string(key);
    if (!file.values_.emplace(full, std::move(v)).second) {
      throw error(lineNo, fmt::format("duplicate key '{}'", full));
    }
  }
  return file;
}

std::vector<std::string> ConfigFile::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void ConfigFile::fail(const std::string& key, const std::string& message) const {
  const auto it = values_.find(key);
  const std::size_t line = it == values_.end() ? 0 : it->second.line;
  throw Error(ErrorCode::ConfigError, fmt::format("'{}': {}", key, message),
              SourcePosition{fileName_, line, 0});
}

const ConfigFile::Value* ConfigFile::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::optional<std::string> ConfigFile::string(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Kind::String) fail(key, "expected a quoted string");
  return v->text;
}

std::optional<std::int64_t> ConfigFile::integer(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  std::int64_t out = 0;
  std::istringstream in(v->text);
  if (v->kind != Kind::Number || !(in >> out) || !in.eof()) fail(key, "expected an integer");
  return out;
}

std::optional<Decimal> ConfigFile::decimal(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Kind::Number) fail(key, "expected a number");
  std::string_view text = v->text;
  if (text.front() == '+') text.remove_prefix(1);
  return Decimal::fromString(text);
}

std::optional<std::vector<std::int64_t>> ConfigFile::integers(const std::string& key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  if (v->kind != Kind::Array) fail(key, "expected an array of integers");
  std::vector<std::int64_t> out;
  for (const std::string& item : v->items) {
    std::int64_t n = 0;
    std::istringstream in(item);
    if (!(in >> n) || !in.eof()) fail(key, fmt::format("'{}' is not an integer", item));
    out.push_back(n);
  }
  return out;
}

void ConfigFile::rejectUnknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.contains(key)) fail(key, "unknown key");
  }
}

Scenario parseScenario(std::string_view text, const std::string& fileName) {
  const ConfigFile cfg = ConfigFile::parse(text, fileName);
  cfg.rejectUnknown({"horizon", "transfer_minutes", "b2_capacity", "product_template", "arrivals.times",
                     "arrivals.mean_minutes", "arrivals.seed", "arrivals.first", "policy.uptime_threshold",
                     "policy.energy_budget_kwh", "policy.trade_rate", "policy.evaluation_window_min",
                     "policy.speed_up_steps_cap"});
  auto bad = [&](const std::string& message) {
    return Error(ErrorCode::ConfigError, message, SourcePosition{fileName, 0, 0});
  };

  Scenario s;
  if (auto v = cfg.integer("horizon")) s.horizon = *v;
  if (s.horizon <= 0) throw bad("horizon must be positive");
  if (auto v = cfg.integer("transfer_minutes")) s.transferMinutes = *v;
  if (s.transferMinutes < 0) throw bad("transfer_minutes must not be negative");
  if (auto v = cfg.integer("b2_capacity")) {
    if (*v < 0) throw bad("b2_capacity must not be negative");
    if (*v > 0) s.b2Capacity = static_cast<std::size_t>(*v);  // 0 keeps it unbounded
  }
  s.productTemplate = cfg.string("product_template");

  const bool explicitTimes = cfg.has("arrivals.times");
  const bool generated = cfg.has("arrivals.mean_minutes") || cfg.has("arrivals.seed");
  if (explicitTimes && generated) throw bad("give either arrivals.times or arrivals.mean_minutes/seed");
  if (explicitTimes) {
    const std::vector<std::int64_t> times = *cfg.integers("arrivals.times");
    for (std::int64_t t : times) {
      if (t < 0) throw bad("arrival times must not be negative");
      s.arrivals.push_back(t);
    }
    if (!std::is_sorted(s.arrivals.begin(), s.arrivals.end())) throw bad("arrivals.times must be sorted");
  } else if (generated) {
    const auto mean = cfg.decimal("arrivals.mean_minutes");
    if (!mean || *mean <= Decimal(0)) throw bad("arrivals.mean_minutes must be positive");
    const auto seed = cfg.integer("arrivals.seed").value_or(0);
    const auto first = cfg.integer("arrivals.first").value_or(0);
    if (first < 0) throw bad("arrivals.first must not be negative");
    s.arrivals = exponentialArrivals(static_cast<std::uint64_t>(seed), mean->toDouble(), first, s.horizon);
  } else if (cfg.has("arrivals.first")) {
    throw bad("arrivals.first needs arrivals.mean_minutes");
  }

  PolicyConfig& p = s.policy;
  if (auto v = cfg.decimal("policy.uptime_threshold")) p.uptimeThreshold = v->toDouble();
  if (auto v = cfg.decimal("policy.energy_budget_kwh")) p.energyBudgetKwh = *v;
  if (auto v = cfg.decimal("policy.trade_rate")) p.tradeRate = *v;
  if (auto v = cfg.integer("policy.evaluation_window_min")) p.evaluationWindowMin = *v;
  if (auto v = cfg.integer("policy.speed_up_steps_cap")) {
    if (*v < 0 || *v > 1000) throw bad("policy.speed_up_steps_cap must be in [0, 1000]");
    p.speedUpStepsCap = static_cast<int>(*v);
  }
  validatePolicy(p);
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, fmt::format("cannot read scenario '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parseScenario(text.str(), path);
}

std::vector<SimMinute> exponentialArrivals(std::uint64_t seed, double meanMinutes, SimMinute first,
                                           SimMinute horizon) {
  std::mt19937_64 rng(seed);
  std::vector<SimMinute> out;
  double elapsed = 0;
  while (true) {
    // 53 random bits -> u in [0, 1); the distribution classes are not
    // specified bit-exactly, this is.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto at = first + static_cast<SimMinute>(std::floor(elapsed));
    if (at >= horizon) break;
    out.push_back(at);
    elapsed += -meanMinutes * std::log1p(-u);
  }
  return out;
}

}  // namespace ontomas::sim
