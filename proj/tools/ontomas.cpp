// ontomas: build a KB from CSVs, serve the API, simulate the cell, report OEE.
//
// Exit codes: 0 ok, 1 a module rejected the input, 2 bad usage.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ontomas/api/service.hpp"
#include "ontomas/builder/plant.hpp"
#include "ontomas/error.hpp"
#include "ontomas/kb/turtle.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/runtime/runtime.hpp"
#include "ontomas/sim/engine.hpp"

namespace fs = std::filesystem;
using namespace ontomas;

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void writeFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

std::unique_ptr<kb::KnowledgeBase> loadKb(const fs::path& path) {
  const std::string text = readFile(path);
  try {
    return std::make_unique<kb::KnowledgeBase>(kb::loadTurtle(text));
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

kb::SimMinute parseInstant(const std::string& text) {
  if (auto m = kb::parseDateTime(text)) return *m;
  try {
    std::size_t used = 0;
    const long long minute = std::stoll(text, &used);
    if (used == text.size()) return minute;
  } catch (const std::exception&) {
  }
  throw UsageError(fmt::format("'{}' is neither a minute nor an ISO-8601 UTC timestamp", text));
}

std::pair<kb::SimMinute, kb::SimMinute> parseWindow(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError(fmt::format("--window expects a..b, got '{}'", text));
  return {parseInstant(text.substr(0, dots)), parseInstant(text.substr(dots + 2))};
}

int runBuild(const fs::path& csvDir, const fs::path& out) {
  const builder::PlantDescription plant = builder::loadCsvDirectory(csvDir);
  kb::KnowledgeBase kb;
  kb.write([&](kb::Graph& g) { builder::buildAbox(g, plant); });
  writeFile(out, kb.dumpTurtle());
  std::cout << fmt::format("wrote {} triples ({} resources, {} process plans) to {}\n", kb.size(),
                           plant.resources.size(), plant.processPlans.size(), out.string());
  return 0;
}

int runServe(const fs::path& kbPath, const std::string& host, int port) {
  auto kb = loadKb(kbPath);
  api::HttpServer server(*kb);
  const int bound = server.bind(host, port);
  std::cout << fmt::format("serving {} on http://{}:{}", kbPath.string(), host, bound) << std::endl;
  server.listen();
  return 0;
}

int runSimulate(const fs::path& kbPath, const fs::path& scenarioPath, const fs::path& outDir) {
  auto kb = loadKb(kbPath);
  const sim::Scenario scenario = sim::loadScenario(scenarioPath.string());
  const sim::SimResult result = sim::runScenario(*kb, scenario);
  fs::create_directories(outDir);
  writeFile(outDir / "trace.tsv", sim::renderTrace(result.trace));
  writeFile(outDir / "oee.csv", sim::renderOeeCsv(result.oee));
  writeFile(outDir / "kb-final.ttl", kb->dumpTurtle());
  std::cout << fmt::format("{} parts entered, {} exited, {} adjustments, fleet energy {} -> {} kWh; outputs in {}\n",
                           result.entered, result.exits.size(), result.adjustments.size(),
                           result.initialFleetEnergy.toString(),
                           kb->read([](const kb::Graph& g) { return sim::fleetEnergy(g); }).toString(),
                           outDir.string());
  return 0;
}

int runReport(const fs::path& kbPath, const std::string& resource, const std::string& window) {
  const auto [from, to] = parseWindow(window);
  auto kb = loadKb(kbPath);
  const runtime::OeeReport r = runtime::computeOee(*kb, resource, from, to);
  std::cout << fmt::format("resource {}  window {} .. {}\n", r.resource, kb::formatDateTime(from),
                           kb::formatDateTime(to));
  std::cout << fmt::format("executions      {}\nuptime          {:.6f}\nperfEfficiency  {:.6f}\n"
                           "qualityRate     {:.6f}\noee             {:.6f}\n",
                           r.executions, r.uptime, r.perfEfficiency, r.qualityRate, r.oee);

  const std::vector<std::string> plans = kb->read([&](const kb::Graph& g) {
    std::vector<std::string> out;
    g.forEachMatch({kb::ex(resource), kb::ex("capableOf"), std::nullopt}, [&](const kb::Triple& t) {
      out.push_back(runtime::resolvePlanInstance(g, resource, kb::exLocal(t.object)));
    });
    return out;
  });
  for (const std::string& plan : plans) {
    const Performance p = runtime::expectedPerformance(*kb, resource, plan);
    std::cout << fmt::format("expected {}: durationMin {} energyKwh {} emissions {} quality {}\n", plan,
                             p.durationMin.toString(), p.energyKwh.toString(), p.emissions.toString(),
                             p.quality.toString());
  }

  // Successful executions overlapping the window.
  std::cout << "\nexecutionId\trealStart\trealEnd\tenergyKwh\temissions\tquality\n";
  for (const runtime::HistoryRow& h : runtime::getResourceHistory(*kb, resource)) {
    if (h.realEnd <= from || h.realStart >= to) continue;
    std::cout << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", h.executionId, kb::formatDateTime(h.realStart),
                             kb::formatDateTime(h.realEnd), h.energyKwh.toString(), h.emissions.toString(),
                             h.quality.toString());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-backed knowledge base for a multi-agent manufacturing cell"};
  app.require_subcommand(1, 1);

  std::string csvDir, out, kbPath, scenario, outDir, resource, window, host = "127.0.0.1";
  int port = 8080;

  auto* build = app.add_subcommand("build", "Build a KB from the CSV bundle and write it as Turtle");
  build->add_option("--csv-dir", csvDir, "Directory holding the four CSV files")->required()->check(CLI::ExistingDirectory);
  build->add_option("--out", out, "Output Turtle file")->required();

  auto* serve = app.add_subcommand("serve", "Load a KB and serve the HTTP API");
  serve->add_option("--kb", kbPath, "Turtle KB to load")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind");

  auto* simulate = app.add_subcommand("simulate", "Run the cell simulation on a KB");
  simulate->add_option("--kb", kbPath, "Turtle KB holding the plant")->required()->check(CLI::ExistingFile);
  simulate->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out-dir", outDir, "Where trace.tsv, oee.csv and kb-final.ttl go")->required();

  auto* report = app.add_subcommand("report", "Print a resource's OEE and execution history");
  report->add_option("--kb", kbPath, "Turtle KB")->required()->check(CLI::ExistingFile);
  report->add_option("--resource", resource, "Resource id, e.g. M1")->required();
  report->add_option("--window", window, "a..b, minutes or ISO-8601 UTC timestamps")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << fmt::format("ontomas: {} (see --help)\n", e.what());
    return kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*build) return runBuild(csvDir, out);
    if (*serve) return runServe(kbPath, host, port);
    if (*simulate) return runSimulate(kbPath, scenario, outDir);
    return runReport(kbPath, resource, window);
  } catch (const Error& e) {
    std::cerr << fmt::format("ontomas {}: {}: {}\n", name, e.codeName(), e.what());
    return kDomainError;
  } catch (const UsageError& e) {
    std::cerr << fmt::format("ontomas {}: {}\n", name, e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("ontomas {}: {}\n", name, e.what());
    return kDomainError;
  }
}
