#include "ontomas/api/service.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ontomas/builder/plant.hpp"
#include "ontomas/error.hpp"
#include "ontomas/kb/sim_time.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/query/evaluator.hpp"
#include "ontomas/runtime/runtime.hpp"

namespace ontomas::api {

using json = nlohmann::json;
using kb::Decimal;
using kb::SimMinute;

namespace {

// Failures that belong to the HTTP layer rather than to a library module.
struct RequestError {
  int status;
  std::string code;
  std::string message;
};

RequestError badRequest(std::string message) { return {400, "BadRequest", std::move(message)}; }

ApiResponse jsonResponse(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

ApiResponse ok(json data, int status = 200) {
  return jsonResponse(status, json{{"ok", true}, {"data", std::move(data)}});
}

ApiResponse failure(int status, std::string_view code, std::string_view message) {
  return jsonResponse(status, json{{"ok", false}, {"error", {{"code", code}, {"message", message}}}});
}

// Integral decimals become JSON integers so ids and minutes read naturally.
json number(const Decimal& d) {
  const std::string text = d.toString();
  if (text.find('.') == std::string::npos) return std::stoll(text);
  return d.toDouble();
}

Decimal toDecimal(const json& v, std::string_view field) {
  if (v.is_number_integer()) return Decimal(v.get<std::int64_t>());
  if (v.is_number_float()) {
    // Shortest round-trip text of the double: 110.25 stays 110.25.
    if (auto d = Decimal::parse(fmt::format("{}", v.get<double>()))) return *d;
    // Exponent forms such as 1e-07.
    if (auto d = Decimal::parse(fmt::format("{:f}", v.get<double>()))) return *d;
  }
  if (v.is_string()) {
    if (auto d = Decimal::parse(v.get<std::string>())) return *d;
  }
  throw badRequest(fmt::format("'{}' must be a number", field));
}

SimMinute toMinute(const json& v, std::string_view field) {
  if (v.is_string()) {
    if (auto m = kb::parseDateTime(v.get<std::string>())) return *m;
  } else if (v.is_number_integer()) {
    return v.get<SimMinute>();
  }
  throw badRequest(fmt::format("'{}' must be an ISO-8601 UTC timestamp", field));
}

std::string toText(const json& v, std::string_view field) {
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw badRequest(fmt::format("'{}' must be a non-empty string", field));
  }
  return v.get<std::string>();
}

json parseObject(const std::string& body) {
  json j = json::parse(body.empty() ? std::string("{}") : body, nullptr, false);
  if (j.is_discarded()) throw badRequest("request body is not valid JSON");
  if (!j.is_object()) throw badRequest("request body must be a JSON object");
  return j;
}

void rejectUnknownFields(const json& body, const std::set<std::string>& known) {
  for (const auto& [key, value] : body.items()) {
    if (!known.contains(key)) throw badRequest(fmt::format("unknown field '{}'", key));
  }
}

const json* field(const json& body, const char* name) {
  const auto it = body.find(name);
  return it == body.end() || it->is_null() ? nullptr : &*it;
}

const json& required(const json& body, const char* name) {
  if (const json* v = field(body, name)) return *v;
  throw Error(ErrorCode::MissingField, fmt::format("'{}' is required", name));
}

json toJson(const Performance& p) {
  return {{"durationMin", number(p.durationMin)},
          {"energyKwh", number(p.energyKwh)},
          {"emissions", number(p.emissions)},
          {"quality", number(p.quality)}};
}

// Fields absent from `body` keep their value in `base`.
Performance overlay(Performance base, const json& body) {
  if (const json* v = field(body, "durationMin")) base.durationMin = toDecimal(*v, "durationMin");
  if (const json* v = field(body, "energyKwh")) base.energyKwh = toDecimal(*v, "energyKwh");
  if (const json* v = field(body, "emissions")) base.emissions = toDecimal(*v, "emissions");
  if (const json* v = field(body, "quality")) base.quality = toDecimal(*v, "quality");
  return base;
}

const std::set<std::string> kPerformanceFields = {"durationMin", "energyKwh", "emissions", "quality"};

json toJson(const runtime::ProcessExecution& e) {
  auto optTime = [](const std::optional<SimMinute>& m) {
    return m ? json(kb::formatDateTime(*m)) : json(nullptr);
  };
  return {{"id", e.id},
          {"product", e.product},
          {"plan", e.plan},
          {"resource", e.resource ? json(*e.resource) : json(nullptr)},
          {"status", runtime::statusName(e.status)},
          {"plannedStart", kb::formatDateTime(e.plannedStart)},
          {"plannedEnd", kb::formatDateTime(e.plannedEnd)},
          {"realStart", optTime(e.realStart)},
          {"realEnd", optTime(e.realEnd)},
          {"realPerformance", e.realPerformance ? toJson(*e.realPerformance) : json(nullptr)},
          {"errorMessage", e.errorMessage ? json(*e.errorMessage) : json(nullptr)}};
}

json toJson(const kb::Term& t) {
  if (t.isIri()) return {{"type", "uri"}, {"value", t.lexical()}};
  return {{"type", "literal"}, {"value", t.lexical()}, {"datatype", kb::datatypeIri(t.datatype())}};
}

std::uint64_t echoedRevision() { return kb::KnowledgeBase::lastWriteRevision(); }

std::vector<std::string> splitPath(std::string_view path) {
  std::vector<std::string> out;
  while (!path.empty()) {
    const auto slash = path.find('/');
    const std::string_view seg = path.substr(0, slash);
    if (!seg.empty()) out.emplace_back(seg);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool writeAllowed(const ApiRequest& r) {
  const auto it = r.headers.find("x-write");
  return it != r.headers.end() && lower(it->second) == "true";
}

class Router {
 public:
  Router(kb::KnowledgeBase& kb, const ApiRequest& r) : kb_(kb), r_(r), seg_(splitPath(r.path)) {}

  ApiResponse dispatch() {
    const auto n = seg_.size();
    if (n == 1 && seg_[0] == "executions") return only("POST", [&] { return postExecution(); });
    if (n == 2 && seg_[0] == "executions") {
      if (r_.method == "GET") return getExecution();
      return only("PATCH", [&] { return patchExecution(); });
    }
    if (n == 3 && seg_[0] == "products" && seg_[2] == "status") {
      return only("GET", [&] { return productStatus(); });
    }
    if (n == 3 && seg_[0] == "resources" && seg_[2] == "history") {
      return only("GET", [&] { return history(); });
    }
    if (n == 3 && seg_[0] == "resources" && seg_[2] == "performance") {
      if (r_.method == "GET") return getPerformance();
      return only("PATCH", [&] { return patchPerformance(); });
    }
    if (n == 1 && seg_[0] == "query") return only("POST", [&] { return query(); });
    if (n == 1 && seg_[0] == "build") return only("POST", [&] { return build(); });
    if (n == 1 && seg_[0] == "dump") {
      return only("GET", [&] { return ApiResponse{200, "text/turtle", kb_.dumpTurtle()}; });
    }
    if (n == 1 && seg_[0] == "revision") {
      return only("GET", [&] { return ok({{"revision", kb_.revision()}}); });
    }
    throw RequestError{404, "NotFound", fmt::format("no route for '{}'", r_.path)};
  }

 private:
  template <typename F>
  ApiResponse only(std::string_view method, F&& handler) {
    if (r_.method != method) {
      throw RequestError{405, "MethodNotAllowed", fmt::format("{} is not allowed on '{}'", r_.method, r_.path)};
    }
    return handler();
  }

  ApiResponse postExecution() {
    const json body = parseObject(r_.body);
    rejectUnknownFields(body, {"product", "plan", "plannedStart", "plannedEnd", "resource"});
    const std::string product = toText(required(body, "product"), "product");
    const std::string plan = toText(required(body, "plan"), "plan");
    const SimMinute start = toMinute(required(body, "plannedStart"), "plannedStart");
    const SimMinute end = toMinute(required(body, "plannedEnd"), "plannedEnd");
    std::optional<std::string> resource;
    if (const json* v = field(body, "resource")) resource = toText(*v, "resource");
    const std::string id = runtime::addPlannedExecutionData(kb_, product, plan, start, end, resource);
    return ok({{"executionId", id}, {"revision", echoedRevision()}}, 201);
  }

  ApiResponse getExecution() { return ok(toJson(runtime::getExecution(kb_, seg_[1]))); }

  ApiResponse patchExecution() {
    const json body = parseObject(r_.body);
    rejectUnknownFields(body, {"status", "realStart", "realEnd", "resource", "realPerformance", "errorMessage"});
    runtime::ExecutionPatch patch;
    if (const json* v = field(body, "status")) {
      const std::string name = toText(*v, "status");
      patch.status = runtime::statusFromName(name);
      if (!patch.status) throw badRequest(fmt::format("unknown status '{}'", name));
    }
    if (const json* v = field(body, "realStart")) patch.realStart = toMinute(*v, "realStart");
    if (const json* v = field(body, "realEnd")) patch.realEnd = toMinute(*v, "realEnd");
    if (const json* v = field(body, "resource")) patch.resource = toText(*v, "resource");
    if (const json* v = field(body, "errorMessage")) {
      if (!v->is_string()) throw badRequest("'errorMessage' must be a string");
      patch.errorMessage = v->get<std::string>();
    }
    if (const json* v = field(body, "realPerformance")) {
      if (!v->is_object()) throw badRequest("'realPerformance' must be an object");
      rejectUnknownFields(*v, kPerformanceFields);
      // Duration and energy are measured; emissions and quality default to
      // "none recorded" and "all good".
      required(*v, "durationMin");
      required(*v, "energyKwh");
      patch.realPerformance = overlay(Performance{0, 0, 0, 1}, *v);
    }
    const runtime::ProcessExecution e = runtime::updateExecutionData(kb_, seg_[1], patch);
    return ok({{"executionId", e.id}, {"revision", echoedRevision()}, {"execution", toJson(e)}});
  }

  ApiResponse productStatus() {
    const runtime::ProductStatus s = runtime::getProductStatus(kb_, seg_[1]);
    json executions = json::array();
    for (const auto& e : s.executions) executions.push_back(toJson(e));
    return ok({{"product", s.product},
               {"features", s.features},
               {"deadline", s.deadline ? json(kb::formatDateTime(*s.deadline)) : json(nullptr)},
               {"latestStatus", s.latestStatus},
               {"executions", std::move(executions)}});
  }

  ApiResponse history() {
    const auto it = r_.query.find("status");
    const std::string status = it == r_.query.end() ? "successful" : it->second;
    json rows = json::array();
    for (const runtime::HistoryRow& h : runtime::getResourceHistory(kb_, seg_[1], status)) {
      rows.push_back({{"executionId", h.executionId},
                      {"emissions", number(h.emissions)},
                      {"energyKwh", number(h.energyKwh)},
                      {"quality", number(h.quality)},
                      {"realStart", kb::formatDateTime(h.realStart)},
                      {"realEnd", kb::formatDateTime(h.realEnd)}});
    }
    return ok({{"resource", seg_[1]}, {"status", status}, {"rows", std::move(rows)}});
  }

  // The plan instance addressed by ?plan= or a "plan" body field; without
  // one, the resource's only capable plan.
  std::string planFor(const std::optional<std::string>& requested) {
    const std::string& resource = seg_[1];
    return kb_.read([&](const kb::Graph& g) {
      if (requested) return runtime::resolvePlanInstance(g, resource, *requested);
      std::vector<std::string> plans;
      g.forEachMatch({kb::ex(resource), kb::ex("capableOf"), std::nullopt},
                     [&](const kb::Triple& t) { plans.push_back(kb::exLocal(t.object)); });
      if (plans.empty()) {
        throw Error(ErrorCode::UnknownEntity, fmt::format("'{}' is not a resource with a process plan", resource));
      }
      if (plans.size() > 1) {
        throw Error(ErrorCode::MissingField,
                    fmt::format("'{}' is capable of {} plans; name one with 'plan'", resource, plans.size()));
      }
      return runtime::resolvePlanInstance(g, resource, plans.front());
    });
  }

  ApiResponse getPerformance() {
    std::optional<std::string> requested;
    if (auto it = r_.query.find("plan"); it != r_.query.end()) requested = it->second;
    const std::string plan = planFor(requested);
    return ok({{"resource", seg_[1]},
               {"plan", plan},
               {"performance", toJson(runtime::expectedPerformance(kb_, seg_[1], plan))}});
  }

  ApiResponse patchPerformance() {
    const json body = parseObject(r_.body);
    std::set<std::string> known = kPerformanceFields;
    known.insert("plan");
    rejectUnknownFields(body, known);
    std::optional<std::string> requested;
    if (const json* v = field(body, "plan")) requested = toText(*v, "plan");
    const std::string plan = planFor(requested);
    const Performance next = overlay(runtime::expectedPerformance(kb_, seg_[1], plan), body);
    const Performance stored = runtime::changeResourcePerformance(kb_, seg_[1], plan, next);
    return ok({{"resource", seg_[1]},
               {"plan", plan},
               {"performance", toJson(stored)},
               {"revision", echoedRevision()}});
  }

  ApiResponse query() {
    const query::Query q = query::parse(r_.body);
    if (q.isUpdate() && !writeAllowed(r_)) {
      throw RequestError{403, "WriteNotAllowed", "updates need the header 'X-Write: true'"};
    }
    const query::QueryOutcome outcome = query::execute(kb_, q);
    if (const auto* table = std::get_if<query::ResultTable>(&outcome)) {
      json rows = json::array();
      for (const auto& row : table->rows) {
        json r = json::object();
        for (std::size_t i = 0; i < table->vars.size(); ++i) r[table->vars[i]] = toJson(row[i]);
        rows.push_back(std::move(r));
      }
      return ok({{"vars", table->vars}, {"rows", std::move(rows)}});
    }
    const auto& stats = std::get<query::UpdateStats>(outcome);
    return ok({{"inserted", stats.inserted}, {"deleted", stats.deleted}, {"revision", echoedRevision()}});
  }

  ApiResponse build() {
    if (r_.files.empty()) throw badRequest("expected a multipart/form-data CSV bundle");
    const builder::CsvBundle bundle(r_.files.begin(), r_.files.end());
    const builder::PlantDescription plant = builder::parseCsvBundle(bundle);
    kb_.write([&](kb::Graph& g) { builder::buildAbox(g, plant); });
    return ok({{"resources", plant.resources.size()},
               {"processPlans", plant.processPlans.size()},
               {"features", plant.features.size()},
               {"products", plant.products.size()},
               {"revision", echoedRevision()}});
  }

  kb::KnowledgeBase& kb_;
  const ApiRequest& r_;
  std::vector<std::string> seg_;
};

}  // namespace

int httpStatusFor(std::string_view code) {
  static const std::map<std::string_view, int> table = {
      {"UnknownEntity", 404},       {"NotFound", 404},
      {"InvalidWindow", 422},       {"DomainViolation", 422},
      {"MissingField", 422},        {"CsvSyntaxError", 422},
      {"DanglingReference", 422},   {"EmptyWindow", 422},
      {"NoCapableResource", 422},   {"BudgetInfeasible", 422},
      {"UnboundTemplateVariable", 422},
      {"IllegalTransition", 409},
      {"SyntaxError", 400},         {"UnsupportedFeature", 400},
      {"ParseError", 400},          {"MalformedTriple", 400},
      {"ConfigError", 400},         {"BadRequest", 400},
      {"SchemaProtected", 403},     {"WriteNotAllowed", 403},
      {"MethodNotAllowed", 405},
  };
  const auto it = table.find(code);
  return it == table.end() ? 500 : it->second;
}

ApiResponse ApiService::handle(const ApiRequest& request) const {
  try {
    return Router(kb_, request).dispatch();
  } catch (const Error& e) {
    return failure(httpStatusFor(e.codeName()), e.codeName(), e.what());
  } catch (const RequestError& e) {
    return failure(e.status, e.code, e.message);
  } catch (const std::exception&) {
    // No internal detail leaves the process.
    return failure(500, "Internal", "internal error");
  }
}

}  // namespace ontomas::api
