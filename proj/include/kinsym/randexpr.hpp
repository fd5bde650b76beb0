#pragma once

// Seeded random expression generation for property tests and the randomized
// identity corpus inside reports. All draws go through an explicit
// mt19937_64 so a fixed seed reproduces the same corpus on every platform.

#include "kinsym/expr.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace kinsym::randexpr {

using symexpr::Expr;
using symexpr::Var;

class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  // random multivariate polynomial: up to max_terms monomials of total degree
  // <= max_degree in the given basis expressions, small integer coefficients
  Expr poly(const std::vector<Expr>& basis, int max_terms = 4, int max_degree = 3) {
    int terms = 1 + static_cast<int>(next(static_cast<std::uint64_t>(max_terms)));
    std::vector<Expr> sum;
    for (int i = 0; i < terms; ++i) {
      long long coeff = small_int_nonzero();
      Expr mono = symexpr::constant(coeff);
      int degree_budget = max_degree;
      for (const Expr& b : basis) {
        if (degree_budget <= 0) break;
        int d = static_cast<int>(next(static_cast<std::uint64_t>(degree_budget) + 1));
        if (d > 0) mono = mul(mono, pow(b, d));
        degree_budget -= d;
      }
      sum.push_back(mono);
    }
    return symexpr::add(std::move(sum));
  }

  // polynomial in the four coordinates
  Expr poly4(int max_terms = 4, int max_degree = 3) {
    return poly({symexpr::t(), symexpr::x(), symexpr::y(), symexpr::z()}, max_terms,
                max_degree);
  }

  // general random AST of bounded depth; transcendental nodes get linear
  // arguments with unit-range coefficients so evaluation stays well scaled
  Expr ast(int depth) {
    if (depth <= 0) return leaf();
    switch (next(7)) {
      case 0: return leaf();
      case 1: return add(ast(depth - 1), ast(depth - 1));
      case 2: return sub(ast(depth - 1), ast(depth - 1));
      case 3: return mul(ast(depth - 1), ast(depth - 1));
      case 4: return pow(ast(depth - 1), 2 + static_cast<long long>(next(2)));
      case 5: return symexpr::sin(linear_arg());
      default: return symexpr::cos(linear_arg());
    }
  }

  // like ast() but also emits exp nodes; used where eval ranges are checked
  Expr ast_with_exp(int depth) {
    if (depth > 0 && next(8) == 0) return symexpr::exp(linear_arg());
    if (depth <= 0) return leaf();
    switch (next(6)) {
      case 0: return leaf();
      case 1: return add(ast_with_exp(depth - 1), ast_with_exp(depth - 1));
      case 2: return sub(ast_with_exp(depth - 1), ast_with_exp(depth - 1));
      case 3: return mul(leaf(), ast_with_exp(depth - 1));
      case 4: return pow(leaf(), 2 + static_cast<long long>(next(2)));
      default: return symexpr::sin(linear_arg());
    }
  }

  Var var() {
    switch (next(4)) {
      case 0: return Var::t;
      case 1: return Var::x;
      case 2: return Var::y;
      default: return Var::z;
    }
  }

  long long small_int_nonzero() {
    long long v = static_cast<long long>(next(6)) - 3;  // -3..2
    return v == 0 ? 3 : v;
  }

  std::uint64_t next(std::uint64_t bound) { return rng_() % bound; }

  std::mt19937_64& engine() { return rng_; }

 private:
  Expr leaf() {
    if (next(4) == 0) return symexpr::constant(small_int_nonzero());
    return symexpr::variable(var());
  }

  Expr linear_arg() { return mul(symexpr::constant(small_int_nonzero()), symexpr::variable(var())); }

  std::mt19937_64 rng_;
};

}  // namespace kinsym::randexpr
