#pragma once

#include <string>
#include <string_view>

#include "ontomas/kb/term.hpp"

namespace ontomas::kb {

inline constexpr std::string_view kExNamespace = "http://example.org/manufacturing#";
inline constexpr std::string_view kRdfNamespace = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNamespace = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwlNamespace = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsdNamespace = "http://www.w3.org/2001/XMLSchema#";

/// `ex:<local>`
Term ex(std::string_view local);
/// Local part of an `ex:` IRI, or the full IRI text for anything else.
std::string exLocal(const Term& term);
/// True when `id` can be used verbatim as the local part of a prefixed name.
bool isSafeLocalName(std::string_view id);

namespace rdf {
const Term& type();
}  // namespace rdf

namespace rdfs {
const Term& subClassOf();
const Term& subPropertyOf();
const Term& domain();
const Term& range();
}  // namespace rdfs

namespace owl {
const Term& Class();
const Term& ObjectProperty();
const Term& DatatypeProperty();
}  // namespace owl

}  // namespace ontomas::kb
