#include "umt/lexer.hpp"

#include <cctype>

namespace umt {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

const char* token_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Bar: return "'|'";
    case TokenKind::At: return "'@'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Eq: return "'='";
    case TokenKind::NotEq: return "'/='";
    case TokenKind::Subset: return "'<:'";
    case TokenKind::Union: return "'\\/'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Amp: return "'&'";
    case TokenKind::Implies: return "'=>'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](TokenKind kind, std::size_t len) {
    out.push_back(Token{kind, std::string(text.substr(i, len)), {line, col}});
    advance(len);
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(TokenKind::Ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Int, j - i);
      continue;
    }
    if (c == '"') {
      const SourcePos start{line, col};
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') {
        throw ParseError(start, "unterminated string literal");
      }
      out.push_back(Token{TokenKind::String,
                          std::string(text.substr(i + 1, j - i - 1)), start});
      advance(j - i + 1);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('-', '>')) { push(TokenKind::Arrow, 2); continue; }
    if (two('/', '=')) { push(TokenKind::NotEq, 2); continue; }
    if (two('<', ':')) { push(TokenKind::Subset, 2); continue; }
    if (two('\\', '/')) { push(TokenKind::Union, 2); continue; }
    if (two('=', '>')) { push(TokenKind::Implies, 2); continue; }
    switch (c) {
      case '(': push(TokenKind::LParen, 1); continue;
      case ')': push(TokenKind::RParen, 1); continue;
      case '{': push(TokenKind::LBrace, 1); continue;
      case '}': push(TokenKind::RBrace, 1); continue;
      case '[': push(TokenKind::LBracket, 1); continue;
      case ']': push(TokenKind::RBracket, 1); continue;
      case ',': push(TokenKind::Comma, 1); continue;
      case ';': push(TokenKind::Semicolon, 1); continue;
      case ':': push(TokenKind::Colon, 1); continue;
      case '.': push(TokenKind::Dot, 1); continue;
      case '|': push(TokenKind::Bar, 1); continue;
      case '@': push(TokenKind::At, 1); continue;
      case '=': push(TokenKind::Eq, 1); continue;
      case '-': push(TokenKind::Minus, 1); continue;
      case '&': push(TokenKind::Amp, 1); continue;
      default: break;
    }
    throw ParseError({line, col}, std::string("unexpected character '") + c + "'");
  }
  out.push_back(Token{TokenKind::End, "", {line, col}});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t k = index_ + ahead;
  return k < tokens_.size() ? tokens_[k] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return t;
}

bool TokenStream::at_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Ident && t.text == word;
}

bool TokenStream::accept(TokenKind kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (!at_keyword(word)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(TokenKind kind, std::string_view what) {
  if (!at(kind)) {
    const Token& t = peek();
    throw ParseError(t.pos, "expected " + std::string(what) + ", found " +
                                (t.kind == TokenKind::End
                                     ? std::string(token_name(t.kind))
                                     : "'" + t.text + "'"));
  }
  return next();
}

void TokenStream::expect_keyword(std::string_view word) {
  if (!at_keyword(word)) fail("expected '" + std::string(word) + "'");
  next();
}

void TokenStream::fail(std::string_view message) const {
  throw ParseError(peek().pos, std::string(message));
}

}  // namespace umt
