#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontomas/kb/graph.hpp"

namespace ontomas::kb {

struct ClassDecl {
  std::string name;
  std::optional<std::string> superClass;
};

struct ObjectPropertyDecl {
  std::string name;
  std::string domain;
  std::string range;
  std::optional<std::string> superProperty;
};

struct DatatypePropertyDecl {
  std::string name;
  std::string domain;
  Datatype range;
};

/// The fixed TBox. Names are local parts in the `ex:` namespace.
struct OntologySchema {
  std::vector<ClassDecl> classes;
  std::vector<ObjectPropertyDecl> objectProperties;
  std::vector<DatatypePropertyDecl> datatypeProperties;

  /// Products, processes, features and resources plus the runtime
  /// (processExecution) and objective-function vocabulary.
  static const OntologySchema& manufacturing();

  /// Class declarations, subclass facts, property declarations with their
  /// domain/range and subproperty facts.
  [[nodiscard]] std::vector<Triple> tboxTriples() const;
  [[nodiscard]] bool declaresProperty(const Term& predicate) const;
  [[nodiscard]] bool declaresClass(const Term& cls) const;
};

/// A graph holding exactly the schema's TBox.
Graph newGraph(const OntologySchema& schema = OntologySchema::manufacturing());

/// Triples of `graph` that are not part of the schema's TBox.
std::vector<Triple> aboxTriples(const Graph& graph,
                                const OntologySchema& schema = OntologySchema::manufacturing());

}  // namespace ontomas::kb
