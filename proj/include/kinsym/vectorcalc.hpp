#pragma once

// Symbolic vector calculus on R^3 fibers over time, plus the extended fields
// xi*d_t + u that live on the time-extended space I x M. Spatial operators
// (grad, div, curl) differentiate in x,y,z only; t rides along as the fiber
// coordinate and gets its own derivative where an operator says so.

#include "kinsym/expr.hpp"
#include "kinsym/identity.hpp"

#include <array>

namespace kinsym::vectorcalc {

using symexpr::Expr;
using symexpr::Var;
using symexpr::add;
using symexpr::mul;
using symexpr::sub;
using symexpr::neg;
using symexpr::pow;

struct VectorField {
  Expr x, y, z;

  static VectorField zero() {
    return {symexpr::zero(), symexpr::zero(), symexpr::zero()};
  }
  const Expr& component(int i) const {
    switch (i) {
      case 0: return x;
      case 1: return y;
      default: return z;
    }
  }
};

// xi * d_t + u, a vector field on the time-extended space
struct ExtendedField {
  Expr xi;
  VectorField u;

  static ExtendedField vertical(VectorField w) {
    return {symexpr::zero(), std::move(w)};
  }
};

inline Expr dt(const Expr& f) { return differentiate(f, Var::t); }
inline Expr dx(const Expr& f) { return differentiate(f, Var::x); }
inline Expr dy(const Expr& f) { return differentiate(f, Var::y); }
inline Expr dz(const Expr& f) { return differentiate(f, Var::z); }

inline VectorField grad(const Expr& f) { return {dx(f), dy(f), dz(f)}; }

inline Expr divergence(const VectorField& v) {
  return add({dx(v.x), dy(v.y), dz(v.z)});
}

inline VectorField curl(const VectorField& v) {
  return {sub(dy(v.z), dz(v.y)), sub(dz(v.x), dx(v.z)), sub(dx(v.y), dy(v.x))};
}

inline Expr dot(const VectorField& a, const VectorField& b) {
  return add({mul(a.x, b.x), mul(a.y, b.y), mul(a.z, b.z)});
}

inline VectorField cross(const VectorField& a, const VectorField& b) {
  return {sub(mul(a.y, b.z), mul(a.z, b.y)),
          sub(mul(a.z, b.x), mul(a.x, b.z)),
          sub(mul(a.x, b.y), mul(a.y, b.x))};
}

inline VectorField scale(const Expr& f, const VectorField& v) {
  return {mul(f, v.x), mul(f, v.y), mul(f, v.z)};
}

inline VectorField vadd(const VectorField& a, const VectorField& b) {
  return {add(a.x, b.x), add(a.y, b.y), add(a.z, b.z)};
}

inline VectorField vsub(const VectorField& a, const VectorField& b) {
  return {sub(a.x, b.x), sub(a.y, b.y), sub(a.z, b.z)};
}

// v . grad f (a purely spatial directional derivative)
inline Expr act(const VectorField& v, const Expr& f) {
  return add({mul(v.x, dx(f)), mul(v.y, dy(f)), mul(v.z, dz(f))});
}

// (xi d_t + u)(f)
inline Expr act(const ExtendedField& e, const Expr& f) {
  return add(mul(e.xi, dt(f)), act(e.u, f));
}

// commutator of two spatial fields: [v,w]^i = v(w^i) - w(v^i)
inline VectorField lie_bracket3(const VectorField& v, const VectorField& w) {
  return {sub(act(v, w.x), act(w, v.x)),
          sub(act(v, w.y), act(w, v.y)),
          sub(act(v, w.z), act(w, v.z))};
}

// commutator on the time-extended space
inline ExtendedField ext_bracket(const ExtendedField& a, const ExtendedField& b) {
  ExtendedField r;
  r.xi = sub(act(a, b.xi), act(b, a.xi));
  r.u = {sub(act(a, b.u.x), act(b, a.u.x)),
         sub(act(a, b.u.y), act(b, a.u.y)),
         sub(act(a, b.u.z), act(b, a.u.z))};
  return r;
}

inline ExtendedField ext_add(const ExtendedField& a, const ExtendedField& b) {
  return {add(a.xi, b.xi), vadd(a.u, b.u)};
}

inline ExtendedField ext_sub(const ExtendedField& a, const ExtendedField& b) {
  return {sub(a.xi, b.xi), vsub(a.u, b.u)};
}

inline ExtendedField ext_scale(const Expr& f, const ExtendedField& a) {
  return {mul(f, a.xi), scale(f, a.u)};
}

// d_t + v, the suspension of a (possibly time-dependent) velocity field
inline ExtendedField suspension(const VectorField& v) { return {symexpr::one(), v}; }

// df/dt along the flow: d_t f + v . grad f
inline Expr material_derivative(const Expr& f, const VectorField& v) {
  return add(dt(f), act(v, f));
}

// d_t B - curl(v x B), zero iff B is frozen into the flow of v
inline VectorField frozen_field_residual(const VectorField& B, const VectorField& v) {
  VectorField c = curl(cross(v, B));
  return {sub(dt(B.x), c.x), sub(dt(B.y), c.y), sub(dt(B.z), c.z)};
}

// [d_t + v, E] - (d_t xi + v(xi)) (d_t + v); zero iff E generates a symmetry
// of the suspended flow
inline ExtendedField symmetry_residual(const ExtendedField& e, const VectorField& v) {
  ExtendedField d = suspension(v);
  ExtendedField lhs = ext_bracket(d, e);
  Expr factor = material_derivative(e.xi, v);
  return ext_sub(lhs, ext_scale(factor, d));
}

// rho^{-1} div(rho w): divergence of w with respect to the weighted volume
// rho dx^dy^dz
inline Expr weighted_div(const VectorField& w, const Expr& rho) {
  return mul(pow(rho, -1), divergence(scale(rho, w)));
}

// ---------------------------------------------------------------------------
// componentwise identity checks

inline symexpr::ZeroCheck is_zero(const VectorField& v, const symexpr::IdentityConfig& cfg = {}) {
  for (int i = 0; i < 3; ++i) {
    symexpr::ZeroCheck c = symexpr::is_zero(v.component(i), cfg);
    if (!c.zero) return c;
  }
  return {true, {}, 0.0, 0.0, 0, 0};
}

inline symexpr::ZeroCheck is_zero(const ExtendedField& e, const symexpr::IdentityConfig& cfg = {}) {
  symexpr::ZeroCheck c = symexpr::is_zero(e.xi, cfg);
  if (!c.zero) return c;
  return is_zero(e.u, cfg);
}

}  // namespace kinsym::vectorcalc
