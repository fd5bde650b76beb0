#pragma once

// Three Poisson brackets carried by a nondegenerate flow scenario, all with
// the orientation {f,g} = U_f(g) fixed by Hamilton's equations i(U_f)Omega = df:
//
//   {f,g}_Omega = (df/dt) U_0(g) - (dg/dt) U_0(f)
//                 + rho^{-1} grad(phi) . grad(f) x grad(g)
//   {f,g}_Phi   = rho^{-1} grad(phi) . grad(f) x grad(g)
//   {f,g}_Gauge = {f,g}_Omega - {f,g}_Phi
//
// where d/dt is the material derivative along the scenario's velocity and
// U_0 = rho^{-1} B. On conserved functions the gauge part vanishes and the
// first two brackets coincide; that is why commutators of hierarchy fields
// share their Hamiltonian functions. The full bracket is computed as U_f(g)
// through the closed-form Hamiltonian field, a code path independent of the
// Phi + Gauge decomposition, so their agreement is a real check.

#include "kinsym/hierarchy.hpp"
#include "kinsym/identity.hpp"
#include "kinsym/scenario.hpp"
#include "kinsym/symplectic.hpp"
#include "kinsym/vectorcalc.hpp"

#include <string>
#include <vector>

namespace kinsym::poisson {

using symexpr::Expr;
using vectorcalc::ExtendedField;
using vectorcalc::VectorField;

enum class BracketKind { Omega, Phi, Gauge };

inline const char* bracket_name(BracketKind k) {
  switch (k) {
    case BracketKind::Omega: return "Omega";
    case BracketKind::Phi: return "Phi";
    default: return "Gauge";
  }
}

namespace detail {
inline void require_nondegenerate(const flow::FlowScenario& s,
                                  const symexpr::IdentityConfig& cfg) {
  if (symexpr::is_zero(symplectic::liouville_density(s), cfg).zero)
    throw symexpr::DegenerateError(
        "bracket undefined: B.grad(phi) vanishes identically");
}
}  // namespace detail

inline Expr bracket(BracketKind kind, const Expr& f, const Expr& g,
                    const flow::FlowScenario& s, const symexpr::IdentityConfig& cfg = {}) {
  using namespace vectorcalc;
  detail::require_nondegenerate(s, cfg);
  switch (kind) {
    case BracketKind::Phi: {
      Expr rho_inv = pow(symplectic::liouville_density(s), -1);
      return simplify(mul(rho_inv, dot(grad(s.phi), cross(grad(f), grad(g)))));
    }
    case BracketKind::Gauge: {
      VectorField U0 = vectorcalc::scale(pow(symplectic::liouville_density(s), -1), s.B);
      Expr fdot = material_derivative(f, s.v);
      Expr gdot = material_derivative(g, s.v);
      return simplify(sub(mul(fdot, act(U0, g)), mul(gdot, act(U0, f))));
    }
    case BracketKind::Omega:
      return simplify(act(symplectic::closed_form_U(f, s), g));
  }
  return symexpr::zero();
}

inline Expr jacobi_residual(BracketKind kind, const Expr& f, const Expr& g, const Expr& h,
                            const flow::FlowScenario& s,
                            const symexpr::IdentityConfig& cfg = {}) {
  Expr fg_h = bracket(kind, bracket(kind, f, g, s, cfg), h, s, cfg);
  Expr gh_f = bracket(kind, bracket(kind, g, h, s, cfg), f, s, cfg);
  Expr hf_g = bracket(kind, bracket(kind, h, f, s, cfg), g, s, cfg);
  return simplify(symexpr::add({fg_h, gh_f, hf_g}));
}

// [U_f, U_g] - U_{{f,g}_Omega}, with every Hamiltonian field obtained from the
// adjugate solve against Omega rather than the closed form.
inline ExtendedField isomorphism_residual(const Expr& f, const Expr& g,
                                          const flow::FlowScenario& s,
                                          const symexpr::IdentityConfig& cfg = {}) {
  symplectic::TwoFormExt omega = symplectic::build_omega(s);
  ExtendedField Uf = symplectic::hamiltonian_field(f, omega, cfg);
  ExtendedField Ug = symplectic::hamiltonian_field(g, omega, cfg);
  ExtendedField lhs = vectorcalc::ext_bracket(Uf, Ug);
  Expr fg = bracket(BracketKind::Omega, f, g, s, cfg);
  ExtendedField rhs = symplectic::hamiltonian_field(fg, omega, cfg);
  return vectorcalc::ext_sub(lhs, rhs);
}

struct InvolutivityRow {
  std::string id;
  symexpr::ZeroCheck check;
};

struct InvolutivityReport {
  std::vector<InvolutivityRow> rows;
  bool all_zero = true;
};

// The gauge brackets of all hierarchy functions vanish pairwise (levels
// k,l >= 1; level 0 carries h_0 = t, which is not conserved and pairs with the
// others through xi instead: {h_k, t}_Omega = xi_k, reported as its own set of
// rows).
inline InvolutivityReport involutivity_report(const std::vector<hierarchy::Level>& levels,
                                              const flow::FlowScenario& s,
                                              const symexpr::IdentityConfig& cfg = {}) {
  InvolutivityReport rep;
  auto push = [&](std::string id, symexpr::ZeroCheck c) {
    rep.all_zero = rep.all_zero && c.zero;
    rep.rows.push_back({std::move(id), std::move(c)});
  };
  for (size_t k = 1; k < levels.size(); ++k) {
    if (levels[k].truncated) continue;
    for (size_t l = k; l < levels.size(); ++l) {
      if (levels[l].truncated) continue;
      Expr br = bracket(BracketKind::Gauge, levels[k].h, levels[l].h, s, cfg);
      push("{h_" + std::to_string(k) + ", h_" + std::to_string(l) + "}_Gauge = 0",
           symexpr::is_zero(br, cfg));
    }
  }
  for (const auto& lv : levels) {
    if (lv.truncated) continue;
    Expr br = bracket(BracketKind::Omega, lv.h, symexpr::t(), s, cfg);
    push("{h_" + std::to_string(lv.k) + ", t}_Omega = xi_" + std::to_string(lv.k),
         symexpr::is_zero(sub(br, lv.xi), cfg));
  }
  return rep;
}

}  // namespace kinsym::poisson
