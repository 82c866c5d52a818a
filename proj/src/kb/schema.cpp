#include "ontomas/kb/schema.hpp"

#include <algorithm>

#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::kb {

const OntologySchema& OntologySchema::manufacturing() {
  static const OntologySchema schema{
      .classes =
          {
              {"Product", std::nullopt},
              {"Specification", std::nullopt},
              {"Feature", std::nullopt},
              {"Process", std::nullopt},
              {"ProcessPlan", "Process"},
              {"ProcessExecution", "Process"},
              {"Resource", std::nullopt},
              {"Machine", "Resource"},
              {"Robot", "Resource"},
              {"Buffer", "Resource"},
              {"Performance", std::nullopt},
              {"ObjectiveFunction", std::nullopt},
              {"Coefficient", std::nullopt},
          },
      .objectProperties =
          {
              {"capableOf", "Resource", "ProcessPlan", std::nullopt},
              {"realizes", "ProcessPlan", "Feature", std::nullopt},
              {"defines", "Product", "Feature", std::nullopt},
              {"hasObjectiveFunction", "Product", "ObjectiveFunction", std::nullopt},
              {"hasCoefficient", "ObjectiveFunction", "Coefficient", std::nullopt},
              // ProcessPlan or ProcessExecution; Process is their common parent.
              {"hasPerformance", "Process", "Performance", std::nullopt},
              {"expectedPerformance", "ProcessPlan", "Performance", "hasPerformance"},
              {"realPerformance", "ProcessExecution", "Performance", "hasPerformance"},
              {"hasProcessExecution", "Product", "ProcessExecution", std::nullopt},
              {"runsOnResource", "ProcessExecution", "Resource", std::nullopt},
              {"runsProcessPlan", "ProcessExecution", "ProcessPlan", std::nullopt},
          },
      .datatypeProperties =
          {
              {"hasValue", "Coefficient", Datatype::Decimal},
              {"coefficientFor", "Coefficient", Datatype::String},
              {"deadline", "Product", Datatype::DateTime},
              {"description", "Feature", Datatype::String},
              {"hasStatus", "ProcessExecution", Datatype::String},
              {"hasErrorMessage", "ProcessExecution", Datatype::String},
              {"plannedStartTime", "ProcessExecution", Datatype::DateTime},
              {"plannedEndTime", "ProcessExecution", Datatype::DateTime},
              {"realStartTime", "ProcessExecution", Datatype::DateTime},
              {"realEndTime", "ProcessExecution", Datatype::DateTime},
              {"duration", "Performance", Datatype::Decimal},
              {"energyCost", "Performance", Datatype::Decimal},
              {"emissions", "Performance", Datatype::Decimal},
              {"quality", "Performance", Datatype::Decimal},
          },
  };
  return schema;
}

std::vector<Triple> OntologySchema::tboxTriples() const {
  std::vector<Triple> out;
  for (const ClassDecl& c : classes) {
    out.push_back({ex(c.name), rdf::type(), owl::Class()});
    if (c.superClass) out.push_back({ex(c.name), rdfs::subClassOf(), ex(*c.superClass)});
  }
  for (const ObjectPropertyDecl& p : objectProperties) {
    out.push_back({ex(p.name), rdf::type(), owl::ObjectProperty()});
    out.push_back({ex(p.name), rdfs::domain(), ex(p.domain)});
    out.push_back({ex(p.name), rdfs::range(), ex(p.range)});
    if (p.superProperty) {
      out.push_back({ex(p.name), rdfs::subPropertyOf(), ex(*p.superProperty)});
    }
  }
  for (const DatatypePropertyDecl& p : datatypeProperties) {
    out.push_back({ex(p.name), rdf::type(), owl::DatatypeProperty()});
    out.push_back({ex(p.name), rdfs::domain(), ex(p.domain)});
    out.push_back({ex(p.name), rdfs::range(), Term::iri(std::string(datatypeIri(p.range)))});
  }
  sortTriples(out);
  return out;
}

bool OntologySchema::declaresProperty(const Term& predicate) const {
  if (predicate == rdf::type()) return true;
  const std::string local = exLocal(predicate);
  return std::any_of(objectProperties.begin(), objectProperties.end(),
                     [&](const auto& p) { return p.name == local; }) ||
         std::any_of(datatypeProperties.begin(), datatypeProperties.end(),
                     [&](const auto& p) { return p.name == local; });
}

bool OntologySchema::declaresClass(const Term& cls) const {
  const std::string local = exLocal(cls);
  return std::any_of(classes.begin(), classes.end(),
                     [&](const auto& c) { return c.name == local; });
}

Graph newGraph(const OntologySchema& schema) {
  Graph graph;
  for (const Triple& t : schema.tboxTriples()) graph.insert(t);
  return graph;
}

std::vector<Triple> aboxTriples(const Graph& graph, const OntologySchema& schema) {
  const std::vector<Triple> tbox = schema.tboxTriples();
  std::vector<Triple> out;
  for (const Triple& t : graph.triples()) {
    if (!std::binary_search(tbox.begin(), tbox.end(), t)) out.push_back(t);
  }
  return out;
}

}  // namespace ontomas::kb
