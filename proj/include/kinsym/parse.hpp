#pragma once

// Recursive-descent parser for the scalar-field expression grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | primary ('^' integer)?
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// '^' takes an optionally signed integer exponent and binds tighter than
// unary minus, so -x^2 is -(x^2). Whitespace is insignificant. Numbers are
// unsigned decimal literals ("3", "0.25") read exactly as rationals.
// Identifiers are the variables t, x, y, z and the functions sin, cos, exp.
//
// Errors carry the byte offset into the source plus the token set that would
// have been accepted there.

#include "kinsym/expr.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace kinsym::symexpr {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, size_t offset, std::vector<std::string> expected)
      : std::runtime_error(message + " at offset " + std::to_string(offset) +
                           (expected.empty() ? "" : " (expected " + join(expected) + ")")),
        offset_(offset),
        expected_(std::move(expected)) {}
  size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) s += xs.size() > 2 ? ", " : " or ";
      if (i > 0 && i + 1 == xs.size() && xs.size() > 2) s += "or ";
      s += xs[i];
    }
    return s;
  }
  size_t offset_;
  std::vector<std::string> expected_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected trailing input '" + std::string(1, src_[pos_]) + "'",
                       pos_, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = add(e, parse_term());
      else if (accept('-'))
        e = sub(e, parse_term());
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = mul(e, parse_factor());
      else if (accept('/'))
        e = div(e, parse_factor());
      else
        return e;
    }
  }

  Expr parse_factor() {
    if (accept('-')) return neg(parse_factor());
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_exponent());
    return base;
  }

  long long parse_exponent() {
    skip_ws();
    size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      throw ParseError("malformed exponent", pos_, {"integer"});
    long long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_] - '0');
      if (v > 1000000)
        throw ParseError("exponent out of range", start, {"integer with |value| <= 1000000"});
      ++pos_;
    }
    return negative ? -v : v;
  }

  Expr parse_primary() {
    char c = peek();
    size_t start = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        name += src_[pos_++];
      if (name == "t") return t();
      if (name == "x") return x();
      if (name == "y") return y();
      if (name == "z") return z();
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!accept('('))
          throw ParseError("function '" + name + "' needs an argument list", pos_, {"'('"});
        Expr arg = parse_expr();
        if (!accept(')')) throw ParseError("unbalanced parenthesis", pos_, {"')'"});
        if (name == "sin") return sin(arg);
        if (name == "cos") return cos(arg);
        return exp(arg);
      }
      throw ParseError("unknown identifier '" + name + "'", start,
                       {"t", "x", "y", "z", "sin", "cos", "exp"});
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!accept(')')) throw ParseError("unbalanced parenthesis", pos_, {"')'"});
      return e;
    }
    std::string found = pos_ < src_.size() ? "'" + std::string(1, c) + "'" : "end of input";
    throw ParseError("expected a value, found " + found, pos_,
                     {"number", "identifier", "'('", "'-'"});
  }

  Expr parse_number() {
    std::string digits;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      digits += src_[pos_++];
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      std::string frac;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        frac += src_[pos_++];
      if (frac.empty())
        throw ParseError("malformed number", pos_, {"digit after '.'"});
      Rational num(digits + frac);
      Rational den(1);
      for (size_t i = 0; i < frac.size(); ++i) den *= 10;
      return constant(num / den);
    }
    return constant(Rational(digits));
  }
};

}  // namespace detail

inline Expr parse(const std::string& src) { return detail::Parser(src).run(); }

}  // namespace kinsym::symexpr
