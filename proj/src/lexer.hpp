#pragma once

// Tokenizer shared by the guard and formula parsers. Internal header.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "somas/error.hpp"

namespace somas::detail {

enum class Tok {
  kIdent,
  kInt,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kLess,
  kLessEq,
  kEqEq,
  kGreaterEq,
  kGreater,
  kBang,
  kAndAnd,
  kOrOr,
  kArrow,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto two = [&](char a, char b) { return i + 1 < text.size() && text[i] == a && text[i + 1] == b; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < text.size() && is_ident_char(text[i])) ++i;
      out.push_back({Tok::kIdent, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::kInt, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (two('<', '=')) { out.push_back({Tok::kLessEq, "<=", start}); i += 2; continue; }
    if (two('>', '=')) { out.push_back({Tok::kGreaterEq, ">=", start}); i += 2; continue; }
    if (two('=', '=')) { out.push_back({Tok::kEqEq, "==", start}); i += 2; continue; }
    if (two('&', '&')) { out.push_back({Tok::kAndAnd, "&&", start}); i += 2; continue; }
    if (two('|', '|')) { out.push_back({Tok::kOrOr, "||", start}); i += 2; continue; }
    if (two('-', '>')) { out.push_back({Tok::kArrow, "->", start}); i += 2; continue; }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '{': kind = Tok::kLBrace; break;
      case '}': kind = Tok::kRBrace; break;
      case ',': kind = Tok::kComma; break;
      case '<': kind = Tok::kLess; break;
      case '>': kind = Tok::kGreater; break;
      case '!': kind = Tok::kBang; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::kEnd, "", text.size()});
  return out;
}

/// Cursor over a token list with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_ident(std::string_view word) const { return at(Tok::kIdent) && peek().text == word; }
  Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok kind, const char* what) {
    if (!at(kind)) fail(std::string("expected ") + what);
    return next();
  }
  std::string expect_ident(const char* what) { return expect(Tok::kIdent, what).text; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.pos);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Reads `name` or `name(arg, ...)` as a single atom name, e.g. `reg(u1,m1)`.
inline std::string read_atom_name(TokenStream& ts, std::string head) {
  if (!ts.at(Tok::kLParen)) return head;
  ts.next();
  head += '(';
  head += ts.expect_ident("argument name");
  while (ts.accept(Tok::kComma)) {
    head += ',';
    head += ts.expect_ident("argument name");
  }
  ts.expect(Tok::kRParen, "')'");
  head += ')';
  return head;
}

}  // namespace somas::detail
