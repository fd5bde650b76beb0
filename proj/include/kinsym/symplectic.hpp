#pragma once

// The time-extended symplectic structure of a flow scenario.
//
// Coordinates are ordered (t, x, y, z) = indices 0..3. A two-form is kept as
// its full antisymmetric component matrix w[mu][nu] with
//   w = sum_{mu<nu} w[mu][nu] dx^mu ^ dx^nu.
//
// The structure two-form of a scenario is
//   Omega = -(grad(phi) + v x B).dx ^ dt + B_x dy^dz + B_y dz^dx + B_z dx^dy
// i.e. Omega[0][i] = (grad(phi) + v x B)_i and the spatial block carries B.
// With these conventions and the interior product (i(V)w)_nu = V^mu w[mu][nu]:
//   - i(d_t + v) Omega = d(phi) whenever phi is advected,
//   - the Pfaffian Pf = w01 w23 - w02 w13 + w03 w12 equals B.grad(phi),
//   - Omega ^ Omega = 2 Pf dt^dx^dy^dz under the increasing-index pair
//     expansion with no combinatorial division.

#include "kinsym/identity.hpp"
#include "kinsym/scenario.hpp"
#include "kinsym/vectorcalc.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace kinsym::symplectic {

using symexpr::Expr;
using symexpr::Var;
using vectorcalc::ExtendedField;
using vectorcalc::VectorField;

inline constexpr std::array<Var, 4> kAxes = {Var::t, Var::x, Var::y, Var::z};

inline Expr d_axis(const Expr& f, int axis) { return differentiate(f, kAxes[axis]); }

// sign of the permutation (a,b,c,d) of (0,1,2,3); 0 on a repeat
inline int epsilon4(int a, int b, int c, int d) {
  int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

struct OneFormExt {
  std::array<Expr, 4> c;  // theta = c[mu] dx^mu
};

struct TwoFormExt {
  std::array<std::array<Expr, 4>, 4> w;

  static TwoFormExt zero() {
    TwoFormExt f;
    for (auto& row : f.w)
      for (auto& e : row) e = symexpr::zero();
    return f;
  }
  // set w[mu][nu] = e and w[nu][mu] = -e
  void set(int mu, int nu, const Expr& e) {
    w[mu][nu] = e;
    w[nu][mu] = neg(e);
  }
};

struct ThreeFormExt {
  // component[m] multiplies the increasing wedge of the three axes != m
  std::array<Expr, 4> component;
};

struct FourFormExt {
  Expr c;  // c dt^dx^dy^dz
};

// ---------------------------------------------------------------------------
// construction and calculus

inline TwoFormExt build_omega(const flow::FlowScenario& s) {
  using namespace vectorcalc;
  TwoFormExt f = TwoFormExt::zero();
  VectorField a = vadd(grad(s.phi), cross(s.v, s.B));
  f.set(0, 1, a.x);
  f.set(0, 2, a.y);
  f.set(0, 3, a.z);
  f.set(2, 3, s.B.x);
  f.set(3, 1, s.B.y);
  f.set(1, 2, s.B.z);
  return f;
}

inline OneFormExt differential(const Expr& f) {
  return {{d_axis(f, 0), d_axis(f, 1), d_axis(f, 2), d_axis(f, 3)}};
}

inline TwoFormExt exterior_derivative(const OneFormExt& th) {
  TwoFormExt f = TwoFormExt::zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      f.set(mu, nu, sub(d_axis(th.c[nu], mu), d_axis(th.c[mu], nu)));
  return f;
}

inline ThreeFormExt exterior_derivative(const TwoFormExt& w) {
  ThreeFormExt out;
  for (int m = 0; m < 4; ++m) {
    int idx[3], k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != m) idx[k++] = i;
    int a = idx[0], b = idx[1], c = idx[2];
    // cyclic form of the alternating sum, valid for antisymmetric w
    out.component[m] = symexpr::add({d_axis(w.w[b][c], a), d_axis(w.w[c][a], b),
                                     d_axis(w.w[a][b], c)});
  }
  return out;
}

inline const char* triple_name(int omitted) {
  switch (omitted) {
    case 0: return "dx^dy^dz";
    case 1: return "dt^dy^dz";
    case 2: return "dt^dx^dz";
    default: return "dt^dx^dy";
  }
}

inline std::vector<std::pair<std::string, symexpr::ZeroCheck>> check_closed(
    const TwoFormExt& w, const symexpr::IdentityConfig& cfg = {}) {
  ThreeFormExt dw = exterior_derivative(w);
  std::vector<std::pair<std::string, symexpr::ZeroCheck>> out;
  for (int m = 0; m < 4; ++m)
    out.emplace_back(triple_name(m), symexpr::is_zero(dw.component[m], cfg));
  return out;
}

inline OneFormExt interior_product(const ExtendedField& v, const TwoFormExt& w) {
  std::array<Expr, 4> vc = {v.xi, v.u.x, v.u.y, v.u.z};
  OneFormExt out;
  for (int nu = 0; nu < 4; ++nu) {
    std::vector<Expr> terms;
    for (int mu = 0; mu < 4; ++mu) terms.push_back(mul(vc[mu], w.w[mu][nu]));
    out.c[nu] = symexpr::add(std::move(terms));
  }
  return out;
}

inline Expr pfaffian(const TwoFormExt& w) {
  return symexpr::add({mul(w.w[0][1], w.w[2][3]), neg(mul(w.w[0][2], w.w[1][3])),
                       mul(w.w[0][3], w.w[1][2])});
}

// literal expansion of w^w over increasing index pairs, no division
inline FourFormExt wedge_square(const TwoFormExt& w) {
  std::vector<Expr> terms;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sigma = rho + 1; sigma < 4; ++sigma) {
          int sign = epsilon4(mu, nu, rho, sigma);
          if (sign == 0) continue;
          terms.push_back(mul(symexpr::constant(sign), mul(w.w[mu][nu], w.w[rho][sigma])));
        }
  return {symexpr::add(std::move(terms))};
}

// rho_phi = -B.grad(phi), the density of Omega^Omega against dt^dx^dy^dz up
// to the convention constant
inline Expr liouville_density(const flow::FlowScenario& s) {
  return neg(dot(s.B, vectorcalc::grad(s.phi)));
}

// ---------------------------------------------------------------------------
// Hamilton's equations i(V)Omega = df

// Solves i(V)w = df for V through the adjugate of the antisymmetric matrix:
// V^mu = Pf^{-1} * (1/2) eps^{mu nu rho sigma} w[rho][sigma] df_nu, using
// det(w) = Pf(w)^2. Verifies the solution before returning and rejects a
// degenerate w (identically vanishing Pfaffian).
inline ExtendedField hamiltonian_field(const Expr& f, const TwoFormExt& w,
                                       const symexpr::IdentityConfig& cfg = {}) {
  Expr pf = pfaffian(w);
  symexpr::ZeroCheck degenerate = symexpr::is_zero(pf, cfg);
  if (degenerate.zero)
    throw symexpr::DegenerateError(
        "two-form is degenerate: its Pfaffian vanishes identically");
  OneFormExt df = differential(f);
  Expr pf_inv = pow(pf, -1);
  std::array<Expr, 4> vc;
  for (int mu = 0; mu < 4; ++mu) {
    std::vector<Expr> terms;
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sigma = 0; sigma < 4; ++sigma) {
          int sign = epsilon4(mu, nu, rho, sigma);
          if (sign == 0) continue;
          terms.push_back(
              mul(symexpr::constant(sign, 2), mul(w.w[rho][sigma], df.c[nu])));
        }
    vc[mu] = mul(pf_inv, symexpr::add(std::move(terms)));
  }
  ExtendedField v{vc[0], {vc[1], vc[2], vc[3]}};
  OneFormExt back = interior_product(v, w);
  for (int nu = 0; nu < 4; ++nu) {
    symexpr::ZeroCheck c = symexpr::is_zero(sub(back.c[nu], df.c[nu]), cfg);
    if (!c.zero)
      throw symexpr::InvariantViolationError("i(V)w = df (component " +
                                                 std::string(symexpr::var_name(kAxes[nu])) + ")",
                                             c);
  }
  return v;
}

// The fluid-mechanical closed form of the same solution:
//   U = rho^{-1} [ -B(f) (d_t + v) + (df/dt) B + grad(phi) x grad(f) . grad ]
inline ExtendedField closed_form_U(const Expr& f, const flow::FlowScenario& s) {
  using namespace vectorcalc;
  Expr rho_inv = pow(liouville_density(s), -1);
  Expr xi = neg(mul(rho_inv, act(s.B, f)));
  Expr fdot = material_derivative(f, s.v);
  VectorField u = vadd(scale(xi, s.v),
                       vadd(scale(mul(rho_inv, fdot), s.B),
                            scale(rho_inv, cross(grad(s.phi), grad(f)))));
  return {xi, u};
}

// ---------------------------------------------------------------------------
// exactness: Omega = -d(theta) with -theta = psi dt + A.dx

// -psi = phi + p/rho + |v|^2 / 2
inline Expr euler_psi(const flow::FlowScenario& s) {
  if (!s.p_over_rho)
    throw std::invalid_argument("euler_psi needs p_over_rho in the scenario");
  Expr v2 = dot(s.v, s.v);
  return neg(symexpr::add({s.phi, *s.p_over_rho, symexpr::div(v2, symexpr::constant(2))}));
}

struct ExactnessResult {
  Expr psi;                    // the psi actually used
  VectorField curl_residual;   // curl(A) - B
  VectorField gauge_residual;  // d_t A - v x curl(A) - grad(phi + psi)
  TwoFormExt form_residual;    // d(theta) + Omega, with theta = -(psi dt + A.dx)
};

inline ExactnessResult exactness_residual(const flow::FlowScenario& s) {
  using namespace vectorcalc;
  if (!s.A) throw std::invalid_argument("exactness check needs the potential A");
  Expr psi = s.psi ? *s.psi : euler_psi(s);
  const VectorField& A = *s.A;
  VectorField curl_res = vsub(curl(A), s.B);
  VectorField dtA = {vectorcalc::dt(A.x), vectorcalc::dt(A.y), vectorcalc::dt(A.z)};
  VectorField gauge_res =
      vsub(vsub(dtA, cross(s.v, curl(A))), grad(add(s.phi, psi)));

  OneFormExt theta;
  theta.c[0] = neg(psi);
  theta.c[1] = neg(A.x);
  theta.c[2] = neg(A.y);
  theta.c[3] = neg(A.z);
  TwoFormExt dtheta = exterior_derivative(theta);
  TwoFormExt omega = build_omega(s);
  TwoFormExt res = TwoFormExt::zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      res.set(mu, nu, add(dtheta.w[mu][nu], omega.w[mu][nu]));
  return {psi, curl_res, gauge_res, res};
}

inline symexpr::ZeroCheck is_zero(const OneFormExt& th, const symexpr::IdentityConfig& cfg = {}) {
  for (int nu = 0; nu < 4; ++nu) {
    symexpr::ZeroCheck c = symexpr::is_zero(th.c[nu], cfg);
    if (!c.zero) return c;
  }
  return {true, {}, 0.0, 0.0, 0, 0};
}

inline symexpr::ZeroCheck is_zero(const TwoFormExt& w, const symexpr::IdentityConfig& cfg = {}) {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      symexpr::ZeroCheck c = symexpr::is_zero(w.w[mu][nu], cfg);
      if (!c.zero) return c;
    }
  return {true, {}, 0.0, 0.0, 0, 0};
}

}  // namespace kinsym::symplectic
