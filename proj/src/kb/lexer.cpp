#include "ontomas/kb/lexer.hpp"

#include <cctype>

#include <fmt/format.h>

namespace ontomas::kb {

namespace {

bool isNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}
bool isDigit(char c) { return c >= '0' && c <= '9'; }

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

bool Token::isWord(std::string_view w) const {
  if (kind != TokenKind::Word || text.size() != w.size()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) !=
        std::toupper(static_cast<unsigned char>(w[i]))) {
      return false;
    }
  }
  return true;
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::IriRef: return "<" + token.text + ">";
    case TokenKind::PrefixedName: return "'" + token.prefix + ":" + token.text + "'";
    case TokenKind::Variable: return "?" + token.text;
    case TokenKind::String: return "string literal";
    case TokenKind::LangTag: return "@" + token.text;
    default: return "'" + token.text + "'";
  }
}

Lexer::Lexer(std::string_view text, ErrorCode errorCode)
    : text_(text), errorCode_(errorCode) {}

char Lexer::at(std::size_t offset) const {
  return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
}

char Lexer::advance() {
  const char c = text_[pos_++];
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  return c;
}

void Lexer::failHere(const std::string& message) const {
  throw Error(errorCode_, message, SourcePosition{"", line_, column_});
}

void Lexer::fail(const Token& at, const std::string& message) const {
  throw Error(errorCode_, message, SourcePosition{"", at.line, at.column});
}

void Lexer::failExpected(const Token& at, std::string_view expected) const {
  fail(at, fmt::format("expected {}, found {}", expected, describe(at)));
}

void Lexer::skipSpaceAndComments() {
  while (pos_ < text_.size()) {
    const char c = at();
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == '#') {
      while (pos_ < text_.size() && at() != '\n') advance();
    } else {
      break;
    }
  }
}

bool Lexer::looksLikeIriRef() const {
  for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
    const char c = text_[i];
    if (c == '>') return true;
    if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' ||
        c == '{' || c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
      return false;
    }
  }
  return false;
}

Token Lexer::scanString(char quote, std::size_t line, std::size_t column) {
  Token tok{TokenKind::String, {}, {}, line, column};
  advance();  // opening quote
  while (true) {
    if (pos_ >= text_.size()) failHere("unterminated string literal");
    if (at() == '\n' || at() == '\r') failHere("unterminated string literal");
    const char c = advance();
    if (c == quote) break;
    if (c != '\\') {
      tok.text.push_back(c);
      continue;
    }
    if (pos_ >= text_.size()) failHere("unterminated escape sequence");
    const char e = advance();
    switch (e) {
      case 't': tok.text.push_back('\t'); break;
      case 'n': tok.text.push_back('\n'); break;
      case 'r': tok.text.push_back('\r'); break;
      case 'b': tok.text.push_back('\b'); break;
      case 'f': tok.text.push_back('\f'); break;
      case '"': tok.text.push_back('"'); break;
      case '\'': tok.text.push_back('\''); break;
      case '\\': tok.text.push_back('\\'); break;
      case 'u':
      case 'U': {
        const std::size_t digits = e == 'u' ? 4 : 8;
        std::uint32_t cp = 0;
        for (std::size_t i = 0; i < digits; ++i) {
          const char h = pos_ < text_.size() ? advance() : '\0';
          if (!std::isxdigit(static_cast<unsigned char>(h))) {
            failHere("invalid unicode escape");
          }
          cp = cp * 16 + static_cast<std::uint32_t>(
                             std::isdigit(static_cast<unsigned char>(h))
                                 ? h - '0'
                                 : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
        }
        appendUtf8(tok.text, cp);
        break;
      }
      default:
        failHere(fmt::format("invalid escape '\\{}'", e));
    }
  }
  return tok;
}

Token Lexer::scan() {
  skipSpaceAndComments();
  const std::size_t line = line_;
  const std::size_t column = column_;
  Token tok{TokenKind::End, {}, {}, line, column};
  if (pos_ >= text_.size()) return tok;

  const char c = at();

  if (c == '"' || c == '\'') return scanString(c, line, column);

  if (c == '<') {
    if (looksLikeIriRef()) {
      advance();
      tok.kind = TokenKind::IriRef;
      while (at() != '>') tok.text.push_back(advance());
      advance();
      if (tok.text.empty()) failHere("empty IRI");
      return tok;
    }
    advance();
    tok.kind = TokenKind::Punct;
    tok.text = "<";
    if (at() == '=') tok.text.push_back(advance());
    return tok;
  }

  if (c == '?' || c == '$') {
    advance();
    tok.kind = TokenKind::Variable;
    while (std::isalnum(static_cast<unsigned char>(at())) || at() == '_') {
      tok.text.push_back(advance());
    }
    if (tok.text.empty()) {
      throw Error(errorCode_, "variable name expected",
                  SourcePosition{"", line, column});
    }
    return tok;
  }

  if (c == '@') {
    advance();
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(at())) || at() == '-') {
      name.push_back(advance());
    }
    if (name.empty()) failHere("directive or language tag expected after '@'");
    if (name == "prefix" || name == "base") {
      tok.kind = TokenKind::Word;
      tok.text = "@" + name;
    } else {
      tok.kind = TokenKind::LangTag;
      tok.text = name;
    }
    return tok;
  }

  if (isDigit(c) || ((c == '+' || c == '-') && (isDigit(at(1)) || (at(1) == '.' && isDigit(at(2))))) ||
      (c == '.' && isDigit(at(1)))) {
    tok.kind = TokenKind::Integer;
    if (c == '+' || c == '-') tok.text.push_back(advance());
    while (isDigit(at())) tok.text.push_back(advance());
    if (at() == '.' && isDigit(at(1))) {
      tok.kind = TokenKind::Decimal;
      tok.text.push_back(advance());
      while (isDigit(at())) tok.text.push_back(advance());
    }
    if (at() == 'e' || at() == 'E') failHere("floating-point exponents are not supported");
    return tok;
  }

  if (isNameStart(c) || c == ':') {
    std::string head;
    while (isNameChar(at()) || (at() == '.' && isNameChar(at(1)))) head.push_back(advance());
    if (at() == ':') {
      advance();
      tok.kind = TokenKind::PrefixedName;
      tok.prefix = head;
      while (isNameChar(at()) || (at() == '.' && isNameChar(at(1)))) {
        tok.text.push_back(advance());
      }
      return tok;
    }
    tok.kind = TokenKind::Word;
    tok.text = head;
    return tok;
  }

  tok.kind = TokenKind::Punct;
  auto two = [&](char second) {
    if (at(1) == second) {
      tok.text = {advance(), advance()};
      return true;
    }
    return false;
  };
  switch (c) {
    case '^':
      if (two('^')) return tok;
      break;
    case '!':
      if (two('=')) return tok;
      tok.text = advance();
      return tok;
    case '>':
      if (two('=')) return tok;
      tok.text = advance();
      return tok;
    case '&':
      if (two('&')) return tok;
      break;
    case '|':
      if (two('|')) return tok;
      break;
    case '.': case ';': case ',': case '{': case '}': case '(': case ')':
    case '=': case '*': case '[': case ']':
      tok.text = advance();
      return tok;
    default:
      break;
  }
  failHere(fmt::format("unexpected character '{}'", c));
}

const Token& Lexer::peek() {
  if (!hasLookahead_) {
    lookahead_ = scan();
    hasLookahead_ = true;
  }
  return lookahead_;
}

Token Lexer::next() {
  peek();
  hasLookahead_ = false;
  return std::move(lookahead_);
}

bool Lexer::acceptPunct(std::string_view p) {
  if (peek().isPunct(p)) {
    next();
    return true;
  }
  return false;
}

bool Lexer::acceptWord(std::string_view w) {
  if (peek().isWord(w)) {
    next();
    return true;
  }
  return false;
}

Token Lexer::expectPunct(std::string_view p) {
  if (!peek().isPunct(p)) failExpected(peek(), fmt::format("'{}'", p));
  return next();
}

}  // namespace ontomas::kb
