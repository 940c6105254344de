#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "umt/error.hpp"

namespace umt {

enum class TokenKind {
  Ident,
  Int,
  String,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semicolon,
  Colon,
  Dot,
  Bar,
  At,
  Arrow,      // ->
  Eq,         // =
  NotEq,      // /=
  Subset,     // <:
  Union,      // \/
  Minus,      // -
  Amp,        // &
  Implies,    // =>
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

// Tokenizes metamodel, spec and expression text. `--` starts a line comment.
std::vector<Token> tokenize(std::string_view text);

const char* token_name(TokenKind kind);

// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(TokenKind kind, std::size_t ahead = 0) const {
    return peek(ahead).kind == kind;
  }
  bool at_keyword(std::string_view word, std::size_t ahead = 0) const;
  bool accept(TokenKind kind);
  bool accept_keyword(std::string_view word);
  const Token& expect(TokenKind kind, std::string_view what);
  void expect_keyword(std::string_view word);
  [[noreturn]] void fail(std::string_view message) const;
  bool done() const { return at(TokenKind::End); }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace umt
