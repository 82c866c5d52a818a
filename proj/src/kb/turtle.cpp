#include "ontomas/kb/turtle.hpp"

#include <array>
#include <map>
#include <unordered_map>
#include <utility>

#include <fmt/format.h>

#include "ontomas/kb/lexer.hpp"
#include "ontomas/kb/vocabulary.hpp"

namespace ontomas::kb {

namespace {

struct Prefix {
  std::string_view name;
  std::string_view ns;
};

constexpr std::array<Prefix, 5> kDumpPrefixes{{
    {"ex", kExNamespace},
    {"owl", kOwlNamespace},
    {"rdf", kRdfNamespace},
    {"rdfs", kRdfsNamespace},
    {"xsd", kXsdNamespace},
}};

std::string turtleIri(const std::string& iri) {
  for (const Prefix& prefix : kDumpPrefixes) {
    if (iri.size() > prefix.ns.size() &&
        iri.compare(0, prefix.ns.size(), prefix.ns) == 0) {
      const std::string_view local = std::string_view(iri).substr(prefix.ns.size());
      if (isSafeLocalName(local)) return fmt::format("{}:{}", prefix.name, local);
    }
  }
  return "<" + iri + ">";
}

class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) : lexer_(text, ErrorCode::ParseError) {
    for (const Prefix& prefix : kDumpPrefixes) {
      prefixes_.emplace(prefix.name, prefix.ns);
    }
  }

  std::vector<Triple> read() {
    std::vector<Triple> out;
    while (lexer_.peek().kind != TokenKind::End) {
      const Token& tok = lexer_.peek();
      if (tok.isWord("@prefix")) {
        lexer_.next();
        readPrefixBody();
        lexer_.expectPunct(".");
      } else if (tok.isWord("PREFIX")) {
        lexer_.next();
        readPrefixBody();
      } else if (tok.isWord("@base") || tok.isWord("BASE")) {
        lexer_.fail(tok, "@base is not supported");
      } else {
        readStatement(out);
      }
    }
    return out;
  }

 private:
  void readPrefixBody() {
    Token name = lexer_.next();
    if (name.kind != TokenKind::PrefixedName || !name.text.empty()) {
      lexer_.failExpected(name, "prefix name ending in ':'");
    }
    Token iri = lexer_.next();
    if (iri.kind != TokenKind::IriRef) lexer_.failExpected(iri, "IRI");
    prefixes_[name.prefix] = iri.text;
  }

  Term iriTerm(const Token& tok) {
    try {
      if (tok.kind == TokenKind::IriRef) return Term::iri(tok.text);
      auto it = prefixes_.find(tok.prefix);
      if (it == prefixes_.end()) {
        lexer_.fail(tok, fmt::format("undeclared prefix '{}:'", tok.prefix));
      }
      return Term::iri(it->second + tok.text);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      lexer_.fail(tok, e.what());
    }
  }

  Term readIri(std::string_view role) {
    Token tok = lexer_.next();
    if (tok.kind == TokenKind::IriRef || tok.kind == TokenKind::PrefixedName) {
      return iriTerm(tok);
    }
    if (tok.isPunct("[") || (tok.kind == TokenKind::PrefixedName && tok.prefix == "_")) {
      lexer_.fail(tok, "blank nodes are not supported");
    }
    lexer_.failExpected(tok, role);
  }

  Term readObject() {
    Token tok = lexer_.next();
    try {
      switch (tok.kind) {
        case TokenKind::IriRef:
        case TokenKind::PrefixedName:
          if (tok.prefix == "_") lexer_.fail(tok, "blank nodes are not supported");
          return iriTerm(tok);
        case TokenKind::Integer:
          return Term::literal(tok.text, Datatype::Integer);
        case TokenKind::Decimal:
          return Term::literal(tok.text, Datatype::Decimal);
        case TokenKind::Word:
          if (tok.text == "true" || tok.text == "false") {
            return Term::literal(tok.text, Datatype::Boolean);
          }
          break;
        case TokenKind::String: {
          if (lexer_.peek().kind == TokenKind::LangTag) {
            lexer_.fail(lexer_.peek(), "language-tagged literals are not supported");
          }
          if (!lexer_.acceptPunct("^^")) return Term::string(tok.text);
          Token dtTok = lexer_.next();
          if (dtTok.kind != TokenKind::IriRef && dtTok.kind != TokenKind::PrefixedName) {
            lexer_.failExpected(dtTok, "datatype IRI");
          }
          const Term dt = iriTerm(dtTok);
          auto datatype = datatypeFromIri(dt.lexical());
          if (!datatype) {
            lexer_.fail(dtTok, "unsupported datatype " + dt.canonical());
          }
          return Term::literal(tok.text, *datatype);
        }
        default:
          break;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      lexer_.fail(tok, e.what());
    }
    if (tok.isPunct("[") || tok.isPunct("(")) {
      lexer_.fail(tok, "blank nodes and collections are not supported");
    }
    lexer_.failExpected(tok, "object");
  }

  void readStatement(std::vector<Triple>& out) {
    const Term subject = readIri("subject");
    while (true) {
      Term predicate = [&] {
        if (lexer_.peek().isWord("a")) {
          lexer_.next();
          return rdf::type();
        }
        return readIri("predicate");
      }();
      do {
        out.push_back(Triple{subject, predicate, readObject()});
      } while (lexer_.acceptPunct(","));
      if (!lexer_.acceptPunct(";")) break;
      // trailing ';' before '.'
      if (lexer_.peek().isPunct(".")) break;
    }
    lexer_.expectPunct(".");
  }

  Lexer lexer_;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace

std::string turtleTerm(const Term& term) {
  if (term.isIri()) return turtleIri(term.lexical());
  if (term.datatype() == Datatype::String) return term.canonical();
  return fmt::format("\"{}\"^^{}", term.lexical(),
                     turtleIri(std::string(datatypeIri(term.datatype()))));
}

void loadTurtleInto(Graph& graph, std::string_view text) {
  const std::vector<Triple> parsed = TurtleReader(text).read();
  for (const Triple& t : parsed) graph.insert(t);
}

Graph loadTurtle(std::string_view text) {
  Graph graph;
  loadTurtleInto(graph, text);
  return graph;
}

std::string dumpTurtle(const Graph& graph) {
  std::string out;
  for (const Prefix& prefix : kDumpPrefixes) {
    out += fmt::format("@prefix {}: <{}> .\n", prefix.name, prefix.ns);
  }
  out += '\n';
  // Terms recur across lines; render each once.
  std::unordered_map<const Term*, std::string> rendered;
  auto term = [&](const Term& t) -> const std::string& {
    auto [it, fresh] = rendered.try_emplace(&t);
    if (fresh) it->second = turtleTerm(t);
    return it->second;
  };
  graph.forEachSorted([&](const Term& s, const Term& p, const Term& o) {
    out += term(s);
    out += ' ';
    out += term(p);
    out += ' ';
    out += term(o);
    out += " .\n";
  });
  return out;
}

}  // namespace ontomas::kb
