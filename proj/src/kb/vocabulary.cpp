#include "ontomas/kb/vocabulary.hpp"

#include <cctype>

namespace ontomas::kb {

Term ex(std::string_view local) {
  return Term::iri(std::string(kExNamespace) + std::string(local));
}

std::string exLocal(const Term& term) {
  const std::string& text = term.lexical();
  if (term.isIri() && text.compare(0, kExNamespace.size(), kExNamespace) == 0) {
    return text.substr(kExNamespace.size());
  }
  return text;
}

bool isSafeLocalName(std::string_view id) {
  if (id.empty() || id.front() == '-' || id.front() == '.') return false;
  for (unsigned char c : id) {
    if (!std::isalnum(c) && c != '_' && c != '-') return false;
  }
  return true;
}

namespace {
Term iriIn(std::string_view ns, std::string_view local) {
  return Term::iri(std::string(ns) + std::string(local));
}
}  // namespace

namespace rdf {
const Term& type() {
  static const Term term = iriIn(kRdfNamespace, "type");
  return term;
}
}  // namespace rdf

namespace rdfs {
const Term& subClassOf() {
  static const Term term = iriIn(kRdfsNamespace, "subClassOf");
  return term;
}
const Term& subPropertyOf() {
  static const Term term = iriIn(kRdfsNamespace, "subPropertyOf");
  return term;
}
const Term& domain() {
  static const Term term = iriIn(kRdfsNamespace, "domain");
  return term;
}
const Term& range() {
  static const Term term = iriIn(kRdfsNamespace, "range");
  return term;
}
}  // namespace rdfs

namespace owl {
const Term& Class() {
  static const Term term = iriIn(kOwlNamespace, "Class");
  return term;
}
const Term& ObjectProperty() {
  static const Term term = iriIn(kOwlNamespace, "ObjectProperty");
  return term;
}
const Term& DatatypeProperty() {
  static const Term term = iriIn(kOwlNamespace, "DatatypeProperty");
  return term;
}
}  // namespace owl

}  // namespace ontomas::kb
