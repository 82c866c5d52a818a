#pragma once

#include <string>
#include <string_view>

#include "ontomas/kb/graph.hpp"

namespace ontomas::kb {

/// Parses the Turtle subset used for KB snapshots: @prefix/PREFIX directives,
/// IRIs, prefixed names, `a`, predicate/object lists, quoted and typed
/// literals, bare integers/decimals/booleans. Blank nodes, collections,
/// language tags and @base are rejected. The ex, rdf, rdfs, owl and xsd
/// prefixes are predeclared.
///
/// Throws Error(ParseError) with line and column.
Graph loadTurtle(std::string_view text);
/// Adds the parsed triples to an existing graph (all or nothing).
void loadTurtleInto(Graph& graph, std::string_view text);

/// Canonical dump: fixed prefix block, then one statement per line sorted by
/// canonical (s, p, o) text. Two equal graphs always dump byte-identically.
std::string dumpTurtle(const Graph& graph);

/// Turtle spelling of a single term, using the dump's prefixes.
std::string turtleTerm(const Term& term);

}  // namespace ontomas::kb
