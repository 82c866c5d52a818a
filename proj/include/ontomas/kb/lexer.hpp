#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ontomas/error.hpp"

namespace ontomas::kb {

enum class TokenKind {
  End,
  IriRef,        // <...>, text is the IRI
  PrefixedName,  // prefix:local, `prefix` and `text` (local) split
  Variable,      // ?x or $x, text is the name without sigil
  String,        // quoted literal, text is the unescaped value
  Integer,
  Decimal,
  Word,          // bare keyword or @directive
  LangTag,       // @en
  Punct,         // . ; , { } ( ) ^^ = != < <= > >= && || ! *
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::string prefix;
  std::size_t line = 1;
  std::size_t column = 1;

  [[nodiscard]] bool isPunct(std::string_view p) const {
    return kind == TokenKind::Punct && text == p;
  }
  /// Case-insensitive keyword test.
  [[nodiscard]] bool isWord(std::string_view w) const;
};

/// Tokenizer shared by the Turtle and SPARQL readers. Errors are raised with
/// the code passed at construction (ParseError for Turtle, SyntaxError for
/// queries) and carry line/column.
class Lexer {
 public:
  Lexer(std::string_view text, ErrorCode errorCode);

  const Token& peek();
  Token next();
  /// Consumes the next token if it is the given punctuation.
  bool acceptPunct(std::string_view p);
  bool acceptWord(std::string_view w);
  Token expectPunct(std::string_view p);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  [[noreturn]] void failExpected(const Token& at, std::string_view expected) const;

 private:
  Token scan();
  void skipSpaceAndComments();
  [[nodiscard]] char at(std::size_t offset = 0) const;
  char advance();
  [[noreturn]] void failHere(const std::string& message) const;
  Token scanString(char quote, std::size_t line, std::size_t column);
  bool looksLikeIriRef() const;

  std::string_view text_;
  ErrorCode errorCode_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  Token lookahead_;
  bool hasLookahead_ = false;
};

std::string describe(const Token& token);

}  // namespace ontomas::kb
