// Recursive-descent parser for the ASCII formula syntax.
//
//   iff   := imp [ "<->" imp ]            (non-associative, lowest)
//   imp   := or [ "->" imp ]              (right-associative)
//   or    := and { "|" and }              (left-associative)
//   and   := unary { "&" unary }          (left-associative)
//   unary := ("!" | "<>" | "[]") unary | atom
//   atom  := ident | "true" | "false" | "(" iff ")"
//
// Identifiers match [a-z][a-zA-Z0-9_]*. The Unicode symbols ¬ ∧ ∨ → ↔ ▲ ▽ ⊤ ⊥
// are accepted as aliases. `a <-> b` is expanded to (a -> b) & (b -> a).
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "intgc/formula.hpp"

namespace intgc {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t offset, std::string expected)
      : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  /// Byte offset into the input where parsing failed.
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

namespace detail {

enum class Tok { Ident, True, False, Not, Up, Down, And, Or, Imp, Iff, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

class Lexer {
public:
  explicit Lexer(std::string_view in) : in_(in) {}

  Token next() {
    while (pos_ < in_.size() && (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\n' || in_[pos_] == '\r'))
      ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= in_.size()) return {Tok::End, start, {}};

    struct Symbol {
      std::string_view text;
      Tok kind;
    };
    // Longest spellings first so that "<->" wins over "<>".
    static constexpr Symbol symbols[] = {
        {"<->", Tok::Iff}, {"->", Tok::Imp}, {"<>", Tok::Up},    {"[]", Tok::Down}, {"!", Tok::Not},
        {"&", Tok::And},   {"|", Tok::Or},   {"(", Tok::LParen}, {")", Tok::RParen},
        {"\xC2\xAC", Tok::Not},       // ¬
        {"\xE2\x88\xA7", Tok::And},   // ∧
        {"\xE2\x88\xA8", Tok::Or},    // ∨
        {"\xE2\x86\x92", Tok::Imp},   // →
        {"\xE2\x86\x94", Tok::Iff},   // ↔
        {"\xE2\x96\xB2", Tok::Up},    // ▲
        {"\xE2\x96\xBD", Tok::Down},  // ▽
        {"\xE2\x8A\xA4", Tok::True},  // ⊤
        {"\xE2\x8A\xA5", Tok::False}, // ⊥
    };
    for (const auto& s : symbols) {
      if (in_.substr(pos_, s.text.size()) == s.text) {
        pos_ += s.text.size();
        return {s.kind, start, std::string(s.text)};
      }
    }
    const char c = in_[pos_];
    if (c >= 'a' && c <= 'z') {
      while (pos_ < in_.size() && is_ident_char(in_[pos_])) ++pos_;
      std::string word(in_.substr(start, pos_ - start));
      if (word == "true") return {Tok::True, start, word};
      if (word == "false") return {Tok::False, start, word};
      return {Tok::Ident, start, std::move(word)};
    }
    throw ParseError(start, "a formula token");
  }

private:
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  explicit Parser(std::string_view in) : lex_(in) { advance(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (cur_.kind != Tok::End) throw ParseError(cur_.offset, "end of input");
    return f;
  }

private:
  void advance() { cur_ = lex_.next(); }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    if (cur_.kind == Tok::Iff) {
      advance();
      Formula rhs = parse_imp();
      if (cur_.kind == Tok::Iff) throw ParseError(cur_.offset, "parenthesised operand of non-associative '<->'");
      return Formula::iff(lhs, rhs);
    }
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (cur_.kind == Tok::Imp) {
      advance();
      return Formula::imp(lhs, parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (cur_.kind == Tok::Or) {
      advance();
      lhs = Formula::disj(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (cur_.kind == Tok::And) {
      advance();
      lhs = Formula::conj(lhs, parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (cur_.kind) {
      case Tok::Not: advance(); return Formula::neg(parse_unary());
      case Tok::Up: advance(); return Formula::up(parse_unary());
      case Tok::Down: advance(); return Formula::down(parse_unary());
      default: return parse_atom();
    }
  }

  Formula parse_atom() {
    switch (cur_.kind) {
      case Tok::Ident: {
        Formula f = Formula::var(cur_.text);
        advance();
        return f;
      }
      case Tok::True: advance(); return Formula::top();
      case Tok::False: advance(); return Formula::bot();
      case Tok::LParen: {
        advance();
        Formula f = parse_iff();
        if (cur_.kind != Tok::RParen) throw ParseError(cur_.offset, "')'");
        advance();
        return f;
      }
      default: throw ParseError(cur_.offset, "variable, constant, unary operator or '('");
    }
  }

  Lexer lex_;
  Token cur_{Tok::End, 0, {}};
};

}  // namespace detail

/// Parses one formula; throws ParseError on malformed input.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace intgc
