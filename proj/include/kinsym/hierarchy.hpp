#pragma once

// The recursive ladder of conserved functions and symmetry fields attached to
// an admissible pair (phi, h).
//
// Level 0 is the reference pair (h_0 = t, W_0 = U_0) with U_0 = rho^{-1} B the
// vertical field satisfying i(U_0)Omega = dt. From a conserved h the ladder
// climbs by
//   h_1 = h,          W_1 = vertical part of the Hamiltonian field of h,
//   h_2 = -U_0(h),    W_{k} = [W_1, W_{k-1}]   (k >= 2),
//   h_{k+1} = W_1(h_k)  for k >= 2,
// and every level carries xi_k = -U_0(h_k), the time component of the full
// Hamiltonian field U_k = xi_k (d_t + v) + W_k. The ladder truncates when an
// h_k vanishes identically; on many flows that happens quickly because the
// conserved functions depend on only a couple of independent invariants.

#include "kinsym/identity.hpp"
#include "kinsym/scenario.hpp"
#include "kinsym/symplectic.hpp"
#include "kinsym/vectorcalc.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kinsym::hierarchy {

using symexpr::Expr;
using vectorcalc::ExtendedField;
using vectorcalc::VectorField;

// U_0 = rho^{-1} B, the vertical generator dual to dt. Throws DegenerateError
// when the density vanishes identically.
inline VectorField u0(const flow::FlowScenario& s, const symexpr::IdentityConfig& cfg = {}) {
  Expr rho = symplectic::liouville_density(s);
  if (symexpr::is_zero(rho, cfg).zero)
    throw symexpr::DegenerateError(
        "structure is degenerate: B.grad(phi) vanishes identically");
  Expr rho_inv = pow(rho, -1);
  return vectorcalc::scale(rho_inv, s.B);
}

// The vertical part of the Hamiltonian field of h:
//   W_1 = rho^{-1} [ (dh/dt) B + grad(phi) x grad(h) ] - xi_1 v with
//   xi_1 = -rho^{-1} B(h); equivalently closed_form_U(h).u - xi*v.
inline VectorField w1(const Expr& h, const flow::FlowScenario& s) {
  ExtendedField U = symplectic::closed_form_U(h, s);
  return vectorcalc::vsub(U.u, vectorcalc::scale(U.xi, s.v));
}

struct Level {
  int k = 0;
  Expr h;
  VectorField W;
  Expr xi;
  bool truncated = false;  // true when h_k is identically zero
};

enum class GenerateMode {
  Strict,   // verify conservation, invariance, and verticality at every level
  Collect,  // record the ladder without per-level verification
};

struct AdmissibilityReport {
  symexpr::ZeroCheck conserved;         // dh/dt + v.grad(h) = 0
  symexpr::ZeroCheck weakly_conserved;  // the material derivative is itself conserved
  bool functionally_dependent = true;   // d(dh/dt) ^ d(phi) = 0 as two-forms
  std::optional<std::string> dependence_witness;
  bool strictly_admissible() const { return conserved.zero; }
  bool weakly_admissible() const { return weakly_conserved.zero && functionally_dependent; }
};

// Classifies h: strictly admissible (conserved), or weakly admissible (its
// material derivative g is conserved and functionally dependent on phi, i.e.
// all six 2x2 minors of the pair of extended gradients (dg, dphi) vanish).
inline AdmissibilityReport check_h_admissible(const Expr& h, const flow::FlowScenario& s,
                                              const symexpr::IdentityConfig& cfg = {}) {
  using namespace vectorcalc;
  AdmissibilityReport rep;
  Expr g = material_derivative(h, s.v);
  rep.conserved = symexpr::is_zero(g, cfg);
  rep.weakly_conserved = symexpr::is_zero(material_derivative(g, s.v), cfg);

  symplectic::OneFormExt dg = symplectic::differential(g);
  symplectic::OneFormExt dphi = symplectic::differential(s.phi);
  for (int mu = 0; mu < 4 && rep.functionally_dependent; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      Expr minor = sub(mul(dg.c[mu], dphi.c[nu]), mul(dg.c[nu], dphi.c[mu]));
      symexpr::ZeroCheck c = symexpr::is_zero(minor, cfg);
      if (!c.zero) {
        rep.functionally_dependent = false;
        rep.dependence_witness =
            "d(dh/dt)^d(phi) component (" + std::string(symexpr::var_name(symplectic::kAxes[mu])) +
            "," + std::string(symexpr::var_name(symplectic::kAxes[nu])) + ") = " +
            symexpr::render(minor);
        break;
      }
    }
  return rep;
}

// [D, E] - (d xi/dt + v.grad(xi)) D, which vanishes exactly when E generates a
// symmetry of the suspension D = d_t + v.
inline ExtendedField symmetry_residual(const ExtendedField& E, const flow::FlowScenario& s) {
  ExtendedField D = vectorcalc::suspension(s.v);
  ExtendedField br = vectorcalc::ext_bracket(D, E);
  Expr xidot = vectorcalc::material_derivative(E.xi, s.v);
  return vectorcalc::ext_sub(br, vectorcalc::ext_scale(xidot, D));
}

inline ExtendedField assemble_Uk(const Level& lv, const flow::FlowScenario& s) {
  return {lv.xi, vectorcalc::vadd(vectorcalc::scale(lv.xi, s.v), lv.W)};
}

// Builds levels 0..depth. In Strict mode each level is checked on the spot:
//   - dh_k/dt + v.grad(h_k) = 0 (conservation),
//   - [D, W_k] = 0 (the vertical fields are invariants of the motion),
//   - rho^{-1} div(rho W_k) = 0 (volume preservation of the vertical part),
// and a violation throws InvariantViolationError naming the level.
inline std::vector<Level> generate(const flow::FlowScenario& s, int depth,
                                   const symexpr::IdentityConfig& cfg = {},
                                   GenerateMode mode = GenerateMode::Strict) {
  using namespace vectorcalc;
  if (depth < 0) throw std::invalid_argument("hierarchy depth must be >= 0");
  Expr rho = symplectic::liouville_density(s);
  VectorField U0 = u0(s, cfg);  // throws when degenerate
  ExtendedField D = suspension(s.v);

  std::vector<Level> out;
  out.push_back({0, symexpr::t(), U0, symexpr::zero(), false});

  auto verify_level = [&](const Level& lv) {
    if (mode != GenerateMode::Strict || lv.truncated) return;
    std::string tag = "level " + std::to_string(lv.k);
    symexpr::ZeroCheck c = symexpr::is_zero(material_derivative(lv.h, s.v), cfg);
    if (!c.zero)
      throw symexpr::InvariantViolationError(tag + ": dh/dt + v.grad(h) = 0", c);
    ExtendedField brDW = ext_bracket(D, ExtendedField::vertical(lv.W));
    c = vectorcalc::is_zero(brDW, cfg);
    if (!c.zero)
      throw symexpr::InvariantViolationError(tag + ": [d_t + v, W] = 0", c);
    c = symexpr::is_zero(weighted_div(lv.W, rho), cfg);
    if (!c.zero)
      throw symexpr::InvariantViolationError(tag + ": div(rho W) = 0", c);
    if (lv.k >= 2) {
      // the bracket recursion must reproduce the gradient form of the field
      c = vectorcalc::is_zero(vsub(lv.W, w1(lv.h, s)), cfg);
      if (!c.zero)
        throw symexpr::InvariantViolationError(
            tag + ": W = rho^-1 grad(phi) x grad(h) . grad", c);
    }
  };

  if (depth >= 1) {
    Level l1;
    l1.k = 1;
    l1.h = s.h;
    l1.truncated = symexpr::is_zero(s.h, cfg).zero;
    l1.W = l1.truncated ? VectorField::zero() : w1(s.h, s);
    l1.xi = l1.truncated ? symexpr::zero() : simplify(neg(act(U0, s.h)));
    verify_level(l1);
    out.push_back(l1);
  }

  VectorField W1 = out.size() > 1 ? out[1].W : VectorField::zero();
  for (int k = 2; k <= depth; ++k) {
    const Level& prev = out[k - 1];
    Level lv;
    lv.k = k;
    if (prev.truncated) {
      lv.h = symexpr::zero();
      lv.W = VectorField::zero();
      lv.xi = symexpr::zero();
      lv.truncated = true;
    } else {
      // h_2 = -U_0(h_1) = xi_1; beyond that h_{k+1} = W_1(h_k). The fields
      // follow W_2 = [W_1, W_0] and W_k = [W_1, W_{k-1}] for k >= 3 (the
      // iterated Lie derivative of U_0 along W_1; [W_1, W_1] would be 0).
      lv.h = (k == 2) ? out[1].xi : simplify(act(W1, prev.h));
      const VectorField& base = (k == 2) ? out[0].W : prev.W;
      lv.W = lie_bracket3(W1, base);
      lv.truncated = symexpr::is_zero(lv.h, cfg).zero;
      if (lv.truncated) lv.h = symexpr::zero();
      lv.xi = lv.truncated ? symexpr::zero() : simplify(neg(act(U0, lv.h)));
    }
    verify_level(lv);
    out.push_back(lv);
  }
  return out;
}

// ---------------------------------------------------------------------------
// structure among the vertical fields

struct BracketLevelResult {
  Expr h_lk;                        // rho^{-1} grad(phi) . grad(h_l) x grad(h_k)
  VectorField bracket;              // [W_k, W_l]
  symexpr::ZeroCheck consistency;   // [W_k, W_l] - W(h_lk) = 0
};

// The commutator of two ladder fields is again a ladder-type field, generated
// by the function h_lk = rho^{-1} grad(phi).(grad(h_l) x grad(h_k)). Requires
// k, l >= 1 (level 0 pairs with everything through xi instead).
inline BracketLevelResult bracket_level(const std::vector<Level>& levels, int k, int l,
                                        const flow::FlowScenario& s,
                                        const symexpr::IdentityConfig& cfg = {}) {
  using namespace vectorcalc;
  if (k < 1 || l < 1 || k >= static_cast<int>(levels.size()) ||
      l >= static_cast<int>(levels.size()))
    throw std::invalid_argument("bracket_level needs levels 1 <= k,l <= depth");
  Expr rho_inv = pow(symplectic::liouville_density(s), -1);
  Expr h_lk = simplify(
      mul(rho_inv, dot(grad(s.phi), cross(grad(levels[l].h), grad(levels[k].h)))));
  VectorField br = lie_bracket3(levels[k].W, levels[l].W);
  VectorField gen = w1(h_lk, s);
  symexpr::ZeroCheck c = vectorcalc::is_zero(vsub(br, gen), cfg);
  return {h_lk, br, c};
}

// ---------------------------------------------------------------------------
// splitting along the suspension, and the curvature of that splitting

struct SplitField {
  ExtendedField horizontal;  // xi (d_t + v)
  ExtendedField vertical;    // (0, u - xi v)
};

inline SplitField split(const ExtendedField& E, const flow::FlowScenario& s) {
  using namespace vectorcalc;
  ExtendedField hor{E.xi, scale(E.xi, s.v)};
  ExtendedField ver = ExtendedField::vertical(vsub(E.u, scale(E.xi, s.v)));
  return {hor, ver};
}

// vertical part of the commutator of the horizontal lifts: the obstruction to
// the splitting being flat
inline VectorField curvature(const ExtendedField& E, const ExtendedField& F,
                             const flow::FlowScenario& s) {
  using namespace vectorcalc;
  ExtendedField hE{E.xi, scale(E.xi, s.v)};
  ExtendedField hF{F.xi, scale(F.xi, s.v)};
  ExtendedField br = ext_bracket(hE, hF);
  return split(br, s).vertical.u;
}

// ---------------------------------------------------------------------------
// particle-relabelling diagnostics for a candidate vertical field

struct RelabellingCheck {
  std::string id;
  symexpr::ZeroCheck check;
};

// For each ladder level: the marks of a relabelling symmetry. A strict level
// passes all of them; a defective candidate shows up with a witness. Level 0
// contributes only the two field checks, since its generator is time itself
// and conservation of h starts at level 1.
inline std::vector<RelabellingCheck> relabelling_checks(const std::vector<Level>& levels,
                                                        const flow::FlowScenario& s,
                                                        const symexpr::IdentityConfig& cfg = {}) {
  using namespace vectorcalc;
  Expr rho = symplectic::liouville_density(s);
  ExtendedField D = suspension(s.v);
  std::vector<RelabellingCheck> out;
  for (const auto& lv : levels) {
    if (lv.truncated) continue;
    std::string tag = "level " + std::to_string(lv.k);
    out.push_back({tag + ": div(rho W) = 0",
                   symexpr::is_zero(weighted_div(lv.W, rho), cfg)});
    out.push_back({tag + ": [d_t + v, W] = 0",
                   vectorcalc::is_zero(ext_bracket(D, ExtendedField::vertical(lv.W)), cfg)});
    if (lv.k >= 1)
      out.push_back({tag + ": dh/dt + v.grad(h) = 0",
                     symexpr::is_zero(material_derivative(lv.h, s.v), cfg)});
  }
  return out;
}

}  // namespace kinsym::hierarchy
