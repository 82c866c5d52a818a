#include <algorithm>
#include <array>
#include <set>

#include <fmt/format.h>

#include "ontomas/error.hpp"
#include "ontomas/kb/lexer.hpp"
#include "ontomas/kb/vocabulary.hpp"
#include "ontomas/query/query.hpp"

namespace ontomas::query {

using kb::Lexer;
using kb::Term;
using kb::Token;
using kb::TokenKind;

std::string_view compareOpText(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

std::vector<Variable> patternVariables(const std::vector<TriplePattern>& patterns) {
  std::vector<Variable> out;
  auto add = [&out](const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    }
  };
  for (const TriplePattern& p : patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
  return out;
}

namespace {

constexpr std::array kUnsupported = {
    "OPTIONAL", "UNION",  "GROUP",  "ORDER",     "LIMIT",   "OFFSET", "SERVICE",
    "GRAPH",    "MINUS",  "BIND",   "VALUES",    "HAVING",  "CONSTRUCT", "ASK",
    "DESCRIBE", "FROM",   "NAMED",  "EXISTS",    "NOT",     "BASE",   "LOAD",
    "CLEAR",    "DROP",   "CREATE", "WITH",      "USING",   "REDUCED", "COUNT",
    "SUM",      "MIN",    "MAX",    "AVG",       "SAMPLE",  "REGEX",  "STR",
    "LANG",     "BOUND",  "ADD",    "MOVE",      "COPY",    "IN",
};

bool isUnsupportedKeyword(const Token& tok) {
  return std::any_of(kUnsupported.begin(), kUnsupported.end(),
                     [&](const char* kw) { return tok.isWord(kw); });
}

std::string upper(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return text;
}

class QueryParser {
 public:
  explicit QueryParser(std::string_view text)
      : lexer_(text, ErrorCode::SyntaxError),
        prefixes_{{"ex", std::string(kb::kExNamespace)},
                  {"rdf", std::string(kb::kRdfNamespace)},
                  {"rdfs", std::string(kb::kRdfsNamespace)},
                  {"owl", std::string(kb::kOwlNamespace)},
                  {"xsd", std::string(kb::kXsdNamespace)}} {}

  Query parse() {
    Query query;
    while (lexer_.peek().isWord("PREFIX")) {
      lexer_.next();
      Token name = lexer_.next();
      if (name.kind != TokenKind::PrefixedName || !name.text.empty()) {
        lexer_.failExpected(name, "prefix name ending in ':'");
      }
      Token iri = lexer_.next();
      if (iri.kind != TokenKind::IriRef) lexer_.failExpected(iri, "IRI");
      prefixes_[name.prefix] = iri.text;
    }

    const Token& head = lexer_.peek();
    if (head.isWord("SELECT")) {
      query.body = parseSelect();
    } else if (head.isWord("INSERT")) {
      lexer_.next();
      if (lexer_.acceptWord("DATA")) {
        query.body = parseInsertData();
      } else {
        query.body = parseModify(/*hasDelete=*/false);
      }
    } else if (head.isWord("DELETE")) {
      lexer_.next();
      if (lexer_.peek().isWord("DATA") || lexer_.peek().isWord("WHERE")) {
        unsupported(lexer_.peek(), "DELETE " + upper(lexer_.peek().text));
      }
      query.body = parseModify(/*hasDelete=*/true);
    } else {
      rejectIfUnsupported(head);
      lexer_.failExpected(head, "SELECT, INSERT or DELETE");
    }

    const Token& tail = lexer_.peek();
    if (tail.kind != TokenKind::End) {
      rejectIfUnsupported(tail);
      if (tail.isPunct(";")) unsupported(tail, "multiple update operations");
      lexer_.failExpected(tail, "end of query");
    }
    query.prefixes = prefixes_;
    return query;
  }

 private:
  [[noreturn]] void unsupported(const Token& at, const std::string& what) const {
    throw Error(ErrorCode::UnsupportedFeature, what + " is not supported",
                SourcePosition{"", at.line, at.column});
  }

  void rejectIfUnsupported(const Token& tok) const {
    if (isUnsupportedKeyword(tok)) unsupported(tok, upper(tok.text));
  }

  Term resolveIri(const Token& tok) {
    try {
      if (tok.kind == TokenKind::IriRef) return Term::iri(tok.text);
      auto it = prefixes_.find(tok.prefix);
      if (it == prefixes_.end()) {
        lexer_.fail(tok, fmt::format("undeclared prefix '{}:'", tok.prefix));
      }
      return Term::iri(it->second + tok.text);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SyntaxError) throw;
      lexer_.fail(tok, e.what());
    }
  }

  std::optional<Term> tryLiteral(const Token& tok) {
    try {
      switch (tok.kind) {
        case TokenKind::Integer: return Term::literal(tok.text, kb::Datatype::Integer);
        case TokenKind::Decimal: return Term::literal(tok.text, kb::Datatype::Decimal);
        case TokenKind::Word:
          if (tok.text == "true" || tok.text == "false") {
            return Term::literal(tok.text, kb::Datatype::Boolean);
          }
          return std::nullopt;
        case TokenKind::String: {
          if (lexer_.peek().kind == TokenKind::LangTag) {
            unsupported(lexer_.peek(), "language-tagged literal");
          }
          if (!lexer_.acceptPunct("^^")) return Term::string(tok.text);
          Token dt = lexer_.next();
          if (dt.kind != TokenKind::IriRef && dt.kind != TokenKind::PrefixedName) {
            lexer_.failExpected(dt, "datatype IRI");
          }
          const Term dtTerm = resolveIri(dt);
          auto datatype = kb::datatypeFromIri(dtTerm.lexical());
          if (!datatype) unsupported(dt, "datatype " + dtTerm.canonical());
          return Term::literal(tok.text, *datatype);
        }
        default:
          return std::nullopt;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::UnsupportedFeature) {
        throw;
      }
      lexer_.fail(tok, e.what());
    }
  }

  PatternTerm parsePatternTerm(std::string_view role, bool allowVariables = true) {
    Token tok = lexer_.next();
    if (tok.kind == TokenKind::Variable) {
      if (!allowVariables) lexer_.fail(tok, "variables are not allowed in INSERT DATA");
      return Variable{tok.text};
    }
    if (tok.kind == TokenKind::IriRef || tok.kind == TokenKind::PrefixedName) {
      if (tok.kind == TokenKind::PrefixedName && tok.prefix == "_") {
        unsupported(tok, "blank node");
      }
      return resolveIri(tok);
    }
    if (role == "predicate" && tok.isWord("a")) return kb::rdf::type();
    if (role != "predicate") {
      if (auto lit = tryLiteral(tok)) return *lit;
    }
    rejectIfUnsupported(tok);
    if (tok.isPunct("[") || tok.isPunct("(")) unsupported(tok, "blank node or collection");
    lexer_.failExpected(tok, role);
  }

  // subject predicate object (; predicate object)* (, object)* ['.']
  void parseTriplesBlock(std::vector<TriplePattern>& out, bool allowVariables) {
    const PatternTerm subject = parsePatternTerm("subject", allowVariables);
    while (true) {
      const PatternTerm predicate = parsePatternTerm("predicate", allowVariables);
      do {
        out.push_back({subject, predicate, parsePatternTerm("object", allowVariables)});
      } while (lexer_.acceptPunct(","));
      if (!lexer_.acceptPunct(";")) break;
      if (lexer_.peek().isPunct(".") || lexer_.peek().isPunct("}")) break;
    }
  }

  void parseTemplateBlock(std::vector<TriplePattern>& out, bool allowVariables) {
    lexer_.expectPunct("{");
    while (!lexer_.acceptPunct("}")) {
      if (lexer_.peek().kind == TokenKind::End) lexer_.failExpected(lexer_.peek(), "'}'");
      rejectIfUnsupported(lexer_.peek());
      parseTriplesBlock(out, allowVariables);
      if (!lexer_.acceptPunct(".") && !lexer_.peek().isPunct("}")) {
        lexer_.failExpected(lexer_.peek(), "'.' or '}'");
      }
    }
  }

  PatternTerm parseOperand() {
    Token tok = lexer_.next();
    if (tok.kind == TokenKind::Variable) {
      filterVarTokens_.push_back(tok);
      return Variable{tok.text};
    }
    if (tok.kind == TokenKind::IriRef || tok.kind == TokenKind::PrefixedName) {
      return resolveIri(tok);
    }
    if (auto lit = tryLiteral(tok)) return *lit;
    if (tok.kind == TokenKind::Word) {
      if (lexer_.peek().isPunct("(")) unsupported(tok, "function " + upper(tok.text));
      rejectIfUnsupported(tok);
    }
    lexer_.failExpected(tok, "variable, IRI or literal in FILTER");
  }

  void parseCondition(std::vector<FilterExpr>& filters) {
    if (lexer_.acceptPunct("(")) {
      parseConjunction(filters);
      lexer_.expectPunct(")");
      return;
    }
    if (lexer_.peek().isPunct("!")) unsupported(lexer_.peek(), "negation");
    PatternTerm lhs = parseOperand();
    Token opTok = lexer_.next();
    CompareOp op;
    if (opTok.isPunct("=")) op = CompareOp::Eq;
    else if (opTok.isPunct("!=")) op = CompareOp::Ne;
    else if (opTok.isPunct("<")) op = CompareOp::Lt;
    else if (opTok.isPunct("<=")) op = CompareOp::Le;
    else if (opTok.isPunct(">")) op = CompareOp::Gt;
    else if (opTok.isPunct(">=")) op = CompareOp::Ge;
    else lexer_.failExpected(opTok, "comparison operator");
    PatternTerm rhs = parseOperand();
    filters.push_back({std::move(lhs), op, std::move(rhs)});
  }

  void parseConjunction(std::vector<FilterExpr>& filters) {
    parseCondition(filters);
    while (true) {
      if (lexer_.acceptPunct("&&")) {
        parseCondition(filters);
      } else if (lexer_.peek().isPunct("||")) {
        unsupported(lexer_.peek(), "disjunction '||'");
      } else {
        return;
      }
    }
  }

  // { triples and FILTERs }
  void parseGroup(std::vector<TriplePattern>& where, std::vector<FilterExpr>& filters) {
    lexer_.expectPunct("{");
    while (true) {
      const Token& tok = lexer_.peek();
      if (tok.isPunct("}")) {
        lexer_.next();
        break;
      }
      if (tok.kind == TokenKind::End) lexer_.failExpected(tok, "'}'");
      if (tok.isWord("FILTER")) {
        lexer_.next();
        if (lexer_.peek().isWord("NOT") || lexer_.peek().isWord("EXISTS")) {
          unsupported(lexer_.peek(), "FILTER " + upper(lexer_.peek().text));
        }
        if (lexer_.peek().kind == TokenKind::Word) {
          unsupported(lexer_.peek(), "function " + upper(lexer_.peek().text));
        }
        lexer_.expectPunct("(");
        parseConjunction(filters);
        lexer_.expectPunct(")");
        lexer_.acceptPunct(".");
        continue;
      }
      if (tok.isPunct("{")) unsupported(tok, "nested group");
      rejectIfUnsupported(tok);
      parseTriplesBlock(where, /*allowVariables=*/true);
      if (!lexer_.acceptPunct(".") && !lexer_.peek().isPunct("}") &&
          !lexer_.peek().isWord("FILTER")) {
        rejectIfUnsupported(lexer_.peek());
        lexer_.failExpected(lexer_.peek(), "'.', FILTER or '}'");
      }
    }
  }

  void checkFilterVariables(const std::vector<TriplePattern>& where) {
    const std::vector<Variable> bound = patternVariables(where);
    for (const Token& tok : filterVarTokens_) {
      if (std::find(bound.begin(), bound.end(), Variable{tok.text}) == bound.end()) {
        lexer_.fail(tok, fmt::format("FILTER variable ?{} does not occur in WHERE", tok.text));
      }
    }
  }

  SelectQuery parseSelect() {
    lexer_.next();  // SELECT
    SelectQuery select;
    select.distinct = lexer_.acceptWord("DISTINCT");
    std::vector<Token> varTokens;
    bool star = false;
    if (lexer_.acceptPunct("*")) {
      star = true;
    } else {
      while (lexer_.peek().kind == TokenKind::Variable) varTokens.push_back(lexer_.next());
      if (varTokens.empty()) {
        const Token& tok = lexer_.peek();
        rejectIfUnsupported(tok);
        if (tok.isPunct("(")) unsupported(tok, "projection expression");
        lexer_.failExpected(tok, "variable or '*'");
      }
    }
    rejectIfUnsupported(lexer_.peek());
    lexer_.acceptWord("WHERE");
    parseGroup(select.where, select.filters);
    checkFilterVariables(select.where);

    const std::vector<Variable> bound = patternVariables(select.where);
    if (star) {
      select.vars = bound;
    } else {
      for (const Token& tok : varTokens) {
        Variable v{tok.text};
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
          lexer_.fail(tok, fmt::format("selected variable ?{} does not occur in WHERE", tok.text));
        }
        select.vars.push_back(std::move(v));
      }
    }
    return select;
  }

  InsertDataQuery parseInsertData() {
    std::vector<TriplePattern> patterns;
    const Token open = lexer_.peek();
    parseTemplateBlock(patterns, /*allowVariables=*/false);
    InsertDataQuery insert;
    for (const TriplePattern& p : patterns) {
      kb::Triple t{std::get<Term>(p.subject), std::get<Term>(p.predicate),
                   std::get<Term>(p.object)};
      if (!kb::isWellFormed(t)) {
        lexer_.fail(open, "INSERT DATA triple has a literal subject or predicate: " +
                              t.subject.canonical());
      }
      insert.triples.push_back(std::move(t));
    }
    return insert;
  }

  UpdateQuery parseModify(bool hasDelete) {
    UpdateQuery update;
    if (hasDelete) {
      parseTemplateBlock(update.deletePatterns, true);
      if (lexer_.acceptWord("INSERT")) parseTemplateBlock(update.insertTemplates, true);
    } else {
      parseTemplateBlock(update.insertTemplates, true);
    }
    rejectIfUnsupported(lexer_.peek());
    if (!lexer_.acceptWord("WHERE")) lexer_.failExpected(lexer_.peek(), "WHERE");
    parseGroup(update.where, update.filters);
    checkFilterVariables(update.where);
    return update;
  }

  Lexer lexer_;
  std::map<std::string, std::string> prefixes_;
  std::vector<Token> filterVarTokens_;
};

}  // namespace

Query parse(std::string_view text) { return QueryParser(text).parse(); }

}  // namespace ontomas::query
