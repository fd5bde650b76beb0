#pragma once

// Symbolic scalar fields on time-extended space: expressions in the four
// coordinates t, x, y, z with exact rational constants.
//
// Trees are immutable and shared. All construction goes through the factory
// functions below, which normalize on the fly:
//   - sums and products are flattened, n-ary, and sorted by a fixed total order
//   - identical additive terms cancel through their rational coefficients
//   - identical multiplicative bases merge through integer exponents
//   - constants fold exactly (gmp rationals, no floating point in the tree)
//   - x^0 -> 1, x^1 -> x, 0*f -> 0, sin(0) -> 0, cos(0)/exp(0) -> 1
// simplify() re-runs the same normalization bottom-up and is idempotent.
//
// The one normalization exception: a power with negative exponent keeps a
// literal zero base (e.g. (x-x)^-1 becomes 0^-1). Division by zero is a
// property of evaluation, not of construction, so the node survives and
// eval_at reports it.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinsym::symexpr {

using Rational = mpq_class;

enum class Var : int { t = 0, x = 1, y = 2, z = 3 };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::y: return "y";
    case Var::z: return "z";
  }
  return "?";
}

enum class Kind : int {
  Constant = 0,
  Variable = 1,
  Sin = 2,
  Cos = 3,
  Exp = 4,
  Power = 5,
  Product = 6,
  Sum = 7,
};

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  Rational value;           // Constant
  Var var = Var::t;         // Variable
  std::vector<Expr> kids;   // Sum/Product terms, function argument at kids[0]
  long long exponent = 0;   // Power: kids[0] ^ exponent
};

// ---------------------------------------------------------------------------
// total order / structural equality

inline int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  switch (a->kind) {
    case Kind::Constant:
      return cmp(a->value, b->value) < 0 ? -1 : (cmp(a->value, b->value) > 0 ? 1 : 0);
    case Kind::Variable:
      return static_cast<int>(a->var) < static_cast<int>(b->var)
                 ? -1
                 : (static_cast<int>(a->var) > static_cast<int>(b->var) ? 1 : 0);
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
      return compare(a->kids[0], b->kids[0]);
    case Kind::Power: {
      int c = compare(a->kids[0], b->kids[0]);
      if (c != 0) return c;
      return a->exponent < b->exponent ? -1 : (a->exponent > b->exponent ? 1 : 0);
    }
    case Kind::Product:
    case Kind::Sum: {
      size_t n = std::min(a->kids.size(), b->kids.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(a->kids[i], b->kids[i]);
        if (c != 0) return c;
      }
      if (a->kids.size() != b->kids.size())
        return a->kids.size() < b->kids.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

inline bool structurally_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// factories

inline Expr constant(Rational q) {
  q.canonicalize();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = std::move(q);
  return n;
}

inline Expr constant(long num, long den = 1) { return constant(Rational(num, den)); }

inline Expr variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  return n;
}

inline Expr t() { static const Expr e = variable(Var::t); return e; }
inline Expr x() { static const Expr e = variable(Var::x); return e; }
inline Expr y() { static const Expr e = variable(Var::y); return e; }
inline Expr z() { static const Expr e = variable(Var::z); return e; }

inline Expr zero() { static const Expr e = constant(0); return e; }
inline Expr one() { static const Expr e = constant(1); return e; }

inline bool is_constant(const Expr& e) { return e->kind == Kind::Constant; }
inline bool is_constant(const Expr& e, long v) {
  return e->kind == Kind::Constant && cmp(e->value, Rational(v)) == 0;
}
inline bool is_structural_zero(const Expr& e) { return is_constant(e, 0); }

inline Expr add(std::vector<Expr> terms);
inline Expr mul(std::vector<Expr> factors);
inline Expr pow(const Expr& base, long long n);

namespace detail {

inline Rational rational_pow(const Rational& q, unsigned long e) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(q.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(q.get_mpq_t()), e);
  r.canonicalize();
  return r;
}

// Splits a normalized term into (rational coefficient, remaining factor).
// The remainder is nullptr for a pure constant.
inline std::pair<Rational, Expr> strip_coefficient(const Expr& e) {
  if (e->kind == Kind::Constant) return {e->value, nullptr};
  if (e->kind == Kind::Product && e->kids[0]->kind == Kind::Constant) {
    const Rational& c = e->kids[0]->value;
    if (e->kids.size() == 2) return {c, e->kids[1]};
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->kids.assign(e->kids.begin() + 1, e->kids.end());
    return {c, n};
  }
  return {Rational(1), e};
}

inline Expr apply_coefficient(const Expr& core, const Rational& c) {
  if (cmp(c, Rational(1)) == 0) return core;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->kids.push_back(constant(c));
  if (core->kind == Kind::Product)
    n->kids.insert(n->kids.end(), core->kids.begin(), core->kids.end());
  else
    n->kids.push_back(core);
  return n;
}

}  // namespace detail

inline Expr add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (auto& e : terms) {
    if (e->kind == Kind::Sum)
      flat.insert(flat.end(), e->kids.begin(), e->kids.end());
    else
      flat.push_back(std::move(e));
  }
  Rational const_part(0);
  std::map<Expr, Rational, ExprLess> by_core;
  for (const auto& e : flat) {
    auto [c, core] = detail::strip_coefficient(e);
    if (!core)
      const_part += c;
    else
      by_core[core] += c;
  }
  std::vector<Expr> out;
  if (cmp(const_part, Rational(0)) != 0) out.push_back(constant(const_part));
  for (const auto& [core, c] : by_core) {
    if (cmp(c, Rational(0)) == 0) continue;
    out.push_back(detail::apply_coefficient(core, c));
  }
  if (out.empty()) return zero();
  if (out.size() == 1) return out[0];
  std::sort(out.begin(), out.end(), ExprLess{});
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->kids = std::move(out);
  return n;
}

inline Expr add(const Expr& a, const Expr& b) { return add(std::vector<Expr>{a, b}); }

inline Expr mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (auto& e : factors) {
    if (e->kind == Kind::Product)
      flat.insert(flat.end(), e->kids.begin(), e->kids.end());
    else
      flat.push_back(std::move(e));
  }
  Rational coeff(1);
  std::map<Expr, long long, ExprLess> by_base;
  for (const auto& e : flat) {
    if (e->kind == Kind::Constant) {
      coeff *= e->value;
    } else if (e->kind == Kind::Power) {
      by_base[e->kids[0]] += e->exponent;
    } else {
      by_base[e] += 1;
    }
  }
  if (cmp(coeff, Rational(0)) == 0) return zero();
  std::vector<Expr> out;
  for (const auto& [base, n] : by_base) {
    if (n == 0) continue;
    Expr f = pow(base, n);
    if (f->kind == Kind::Constant)
      coeff *= f->value;
    else
      out.push_back(f);
  }
  if (cmp(coeff, Rational(0)) == 0) return zero();
  if (out.empty()) return constant(coeff);
  std::sort(out.begin(), out.end(), ExprLess{});
  if (cmp(coeff, Rational(1)) != 0) out.insert(out.begin(), constant(coeff));
  if (out.size() == 1) return out[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->kids = std::move(out);
  return n;
}

inline Expr mul(const Expr& a, const Expr& b) { return mul(std::vector<Expr>{a, b}); }
inline Expr mul(const Expr& a, const Expr& b, const Expr& c) {
  return mul(std::vector<Expr>{a, b, c});
}

inline Expr pow(const Expr& base, long long n) {
  if (n == 0) return one();  // includes 0^0 -> 1
  if (n == 1) return base;
  if (base->kind == Kind::Constant) {
    if (cmp(base->value, Rational(0)) == 0 && n < 0) {
      // survives so evaluation can report the division by zero
      auto node = std::make_shared<Node>();
      node->kind = Kind::Power;
      node->kids.push_back(base);
      node->exponent = n;
      return node;
    }
    Rational r = detail::rational_pow(base->value, static_cast<unsigned long>(n < 0 ? -n : n));
    if (n < 0) r = 1 / r;
    return constant(r);
  }
  if (base->kind == Kind::Power) return pow(base->kids[0], base->exponent * n);
  if (base->kind == Kind::Product) {
    std::vector<Expr> fs;
    fs.reserve(base->kids.size());
    for (const auto& k : base->kids) fs.push_back(pow(k, n));
    return mul(std::move(fs));
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Power;
  node->kids.push_back(base);
  node->exponent = n;
  return node;
}

inline Expr neg(const Expr& a) { return mul(constant(-1), a); }
inline Expr sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }
inline Expr div(const Expr& a, const Expr& b) { return mul(a, pow(b, -1)); }

inline Expr sin(const Expr& a) {
  if (is_constant(a, 0)) return zero();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sin;
  n->kids.push_back(a);
  return n;
}

inline Expr cos(const Expr& a) {
  if (is_constant(a, 0)) return one();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cos;
  n->kids.push_back(a);
  return n;
}

inline Expr exp(const Expr& a) {
  if (is_constant(a, 0)) return one();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->kids.push_back(a);
  return n;
}

inline Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator+(long a, const Expr& b) { return add(constant(a), b); }
inline Expr operator+(const Expr& a, long b) { return add(a, constant(b)); }
inline Expr operator-(long a, const Expr& b) { return sub(constant(a), b); }
inline Expr operator-(const Expr& a, long b) { return sub(a, constant(b)); }
inline Expr operator*(long a, const Expr& b) { return mul(constant(a), b); }
inline Expr operator*(const Expr& a, long b) { return mul(a, constant(b)); }
inline Expr operator/(long a, const Expr& b) { return div(constant(a), b); }
inline Expr operator/(const Expr& a, long b) { return div(a, constant(b)); }

// ---------------------------------------------------------------------------
// simplify / differentiate

inline Expr simplify(const Expr& e) {
  switch (e->kind) {
    case Kind::Constant: {
      Rational q = e->value;
      return constant(std::move(q));
    }
    case Kind::Variable:
      return e;
    case Kind::Sin:
      return sin(simplify(e->kids[0]));
    case Kind::Cos:
      return cos(simplify(e->kids[0]));
    case Kind::Exp:
      return exp(simplify(e->kids[0]));
    case Kind::Power:
      return pow(simplify(e->kids[0]), e->exponent);
    case Kind::Product: {
      std::vector<Expr> ks;
      ks.reserve(e->kids.size());
      for (const auto& k : e->kids) ks.push_back(simplify(k));
      return mul(std::move(ks));
    }
    case Kind::Sum: {
      std::vector<Expr> ks;
      ks.reserve(e->kids.size());
      for (const auto& k : e->kids) ks.push_back(simplify(k));
      return add(std::move(ks));
    }
  }
  return e;
}

inline Expr differentiate(const Expr& e, Var v) {
  switch (e->kind) {
    case Kind::Constant:
      return zero();
    case Kind::Variable:
      return e->var == v ? one() : zero();
    case Kind::Sin:
      return mul(cos(e->kids[0]), differentiate(e->kids[0], v));
    case Kind::Cos:
      return mul(neg(sin(e->kids[0])), differentiate(e->kids[0], v));
    case Kind::Exp:
      return mul(exp(e->kids[0]), differentiate(e->kids[0], v));
    case Kind::Power: {
      // d(b^n) = n b^(n-1) db, integer n (negative included)
      Expr db = differentiate(e->kids[0], v);
      return mul(constant(e->exponent), mul(pow(e->kids[0], e->exponent - 1), db));
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      terms.reserve(e->kids.size());
      for (size_t i = 0; i < e->kids.size(); ++i) {
        std::vector<Expr> fs;
        fs.reserve(e->kids.size());
        for (size_t j = 0; j < e->kids.size(); ++j)
          fs.push_back(i == j ? differentiate(e->kids[j], v) : e->kids[j]);
        terms.push_back(mul(std::move(fs)));
      }
      return add(std::move(terms));
    }
    case Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e->kids.size());
      for (const auto& k : e->kids) terms.push_back(differentiate(k, v));
      return add(std::move(terms));
    }
  }
  return zero();
}

// ---------------------------------------------------------------------------
// metrics / variable scan

inline size_t tree_size(const Expr& e) {
  size_t n = 1;
  for (const auto& k : e->kids) n += tree_size(k);
  return n;
}

inline void collect_variables(const Expr& e, bool present[4]) {
  if (e->kind == Kind::Variable) present[static_cast<int>(e->var)] = true;
  for (const auto& k : e->kids) collect_variables(k, present);
}

inline bool depends_on(const Expr& e, Var v) {
  bool present[4] = {false, false, false, false};
  collect_variables(e, present);
  return present[static_cast<int>(v)];
}

// ---------------------------------------------------------------------------
// rendering (render/parse round-trips to a structurally equal tree)

namespace detail {

// precedence contexts, loosest to tightest
enum class Ctx { Top, Term, Factor };

inline std::string render_rational(const Rational& q) { return q.get_str(); }

inline std::string render_impl(const Expr& e, Ctx ctx);

inline std::string render_product_tail(const Expr& e, size_t from) {
  std::string s;
  for (size_t i = from; i < e->kids.size(); ++i) {
    if (i > from) s += "*";
    s += render_impl(e->kids[i], Ctx::Factor);
  }
  return s;
}

inline std::string render_impl(const Expr& e, Ctx ctx) {
  switch (e->kind) {
    case Kind::Constant: {
      std::string s = render_rational(e->value);
      bool needs_parens = ctx != Ctx::Top && (sgn(e->value) < 0 || e->value.get_den() != 1);
      return needs_parens ? "(" + s + ")" : s;
    }
    case Kind::Variable:
      return var_name(e->var);
    case Kind::Sin:
      return "sin(" + render_impl(e->kids[0], Ctx::Top) + ")";
    case Kind::Cos:
      return "cos(" + render_impl(e->kids[0], Ctx::Top) + ")";
    case Kind::Exp:
      return "exp(" + render_impl(e->kids[0], Ctx::Top) + ")";
    case Kind::Power: {
      const Expr& b = e->kids[0];
      bool atom = b->kind == Kind::Variable || b->kind == Kind::Sin ||
                  b->kind == Kind::Cos || b->kind == Kind::Exp;
      std::string bs = atom ? render_impl(b, Ctx::Factor)
                            : "(" + render_impl(b, Ctx::Top) + ")";
      return bs + "^" + std::to_string(e->exponent);
    }
    case Kind::Product: {
      const Expr& head = e->kids[0];
      std::string s;
      if (head->kind == Kind::Constant && sgn(head->value) < 0) {
        // hoist the sign: -2*x*y instead of (-2)*x*y, -x*y instead of (-1)*x*y
        Rational mag = -head->value;
        s = "-";
        if (mag != 1 || e->kids.size() == 1) {
          bool parens = mag.get_den() != 1;
          s += parens ? "(" + render_rational(mag) + ")" : render_rational(mag);
          if (e->kids.size() > 1) s += "*";
        }
        s += render_product_tail(e, 1);
        return ctx == Ctx::Top ? s : "(" + s + ")";
      }
      s = render_product_tail(e, 0);
      return ctx == Ctx::Factor ? "(" + s + ")" : s;
    }
    case Kind::Sum: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        const Expr& term = e->kids[i];
        auto [c, core] = strip_coefficient(term);
        if (i == 0) {
          if (sgn(c) < 0) {
            Expr flipped = core ? apply_coefficient(core, -c) : constant(-c);
            s += "-" + render_impl(flipped, Ctx::Term);
          } else {
            s += render_impl(term, Ctx::Term);
          }
        } else if (sgn(c) < 0) {
          Expr flipped = core ? apply_coefficient(core, -c) : constant(-c);
          s += " - " + render_impl(flipped, Ctx::Term);
        } else {
          s += " + " + render_impl(term, Ctx::Term);
        }
      }
      return ctx == Ctx::Top ? s : "(" + s + ")";
    }
  }
  return "?";
}

}  // namespace detail

inline std::string render(const Expr& e) { return detail::render_impl(e, detail::Ctx::Top); }

// ---------------------------------------------------------------------------
// evaluation

struct SamplePoint {
  double t = 0, x = 0, y = 0, z = 0;
  double operator[](Var v) const {
    switch (v) {
      case Var::t: return t;
      case Var::x: return x;
      case Var::y: return y;
      case Var::z: return z;
    }
    return 0;
  }
};

struct EvalOptions {
  // Negative powers whose base magnitude is <= min_denominator raise an
  // EvalError; zero means only exact zeros do.
  double min_denominator = 0.0;
};

class EvalError : public std::runtime_error {
 public:
  enum class Code { DivisionByZero, NearZeroDenominator, NonFinite };
  EvalError(Code code, std::string subexpr, const SamplePoint& at)
      : std::runtime_error(describe(code, subexpr, at)),
        code_(code),
        subexpr_(std::move(subexpr)),
        at_(at) {}
  Code code() const { return code_; }
  const std::string& subexpr() const { return subexpr_; }
  const SamplePoint& at() const { return at_; }

 private:
  static std::string describe(Code code, const std::string& sub, const SamplePoint& p) {
    std::string what;
    switch (code) {
      case Code::DivisionByZero: what = "division by zero in "; break;
      case Code::NearZeroDenominator: what = "denominator below guard in "; break;
      case Code::NonFinite: what = "non-finite value in "; break;
    }
    what += sub + " at (t,x,y,z)=(" + std::to_string(p.t) + "," + std::to_string(p.x) +
            "," + std::to_string(p.y) + "," + std::to_string(p.z) + ")";
    return what;
  }
  Code code_;
  std::string subexpr_;
  SamplePoint at_;
};

namespace detail {

inline double int_pow(double b, long long n) {
  if (n < 0) return 1.0 / int_pow(b, -n);
  double r = 1.0, acc = b;
  while (n > 0) {
    if (n & 1) r *= acc;
    acc *= acc;
    n >>= 1;
  }
  return r;
}

inline double eval_impl(const Expr& e, const SamplePoint& p, const EvalOptions& opt) {
  double r = 0;
  switch (e->kind) {
    case Kind::Constant:
      r = e->value.get_d();
      break;
    case Kind::Variable:
      r = p[e->var];
      break;
    case Kind::Sin:
      r = std::sin(eval_impl(e->kids[0], p, opt));
      break;
    case Kind::Cos:
      r = std::cos(eval_impl(e->kids[0], p, opt));
      break;
    case Kind::Exp:
      r = std::exp(eval_impl(e->kids[0], p, opt));
      break;
    case Kind::Power: {
      double b = eval_impl(e->kids[0], p, opt);
      if (e->exponent < 0) {
        if (b == 0.0)
          throw EvalError(EvalError::Code::DivisionByZero, render(e), p);
        if (std::abs(b) <= opt.min_denominator)
          throw EvalError(EvalError::Code::NearZeroDenominator, render(e), p);
      }
      r = int_pow(b, e->exponent);
      break;
    }
    case Kind::Product:
      r = 1.0;
      for (const auto& k : e->kids) r *= eval_impl(k, p, opt);
      break;
    case Kind::Sum:
      for (const auto& k : e->kids) r += eval_impl(k, p, opt);
      break;
  }
  if (!std::isfinite(r)) throw EvalError(EvalError::Code::NonFinite, render(e), p);
  return r;
}

}  // namespace detail

inline double eval_at(const Expr& e, const SamplePoint& p, const EvalOptions& opt = {}) {
  return detail::eval_impl(e, p, opt);
}

// Value together with the magnitude scale of the expression at the point: for
// a sum, the largest |term|; otherwise |value|. The scale feeds relative
// tolerances so cancellation-heavy identities are judged against the size of
// what cancelled.
struct ValueWithScale {
  double value;
  double scale;
};

inline ValueWithScale eval_with_scale(const Expr& e, const SamplePoint& p,
                                      const EvalOptions& opt = {}) {
  if (e->kind != Kind::Sum) {
    double v = eval_at(e, p, opt);
    return {v, std::abs(v)};
  }
  double sum = 0, scale = 0;
  for (const auto& k : e->kids) {
    double v = eval_at(k, p, opt);
    sum += v;
    scale = std::max(scale, std::abs(v));
  }
  if (!std::isfinite(sum)) throw EvalError(EvalError::Code::NonFinite, render(e), p);
  return {sum, scale};
}

}  // namespace kinsym::symexpr
