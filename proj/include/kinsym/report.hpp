#pragma once

// Full verification run over a flow scenario: every identity the construction
// promises, executed in a fixed order with seeded randomness and collected
// into a machine-readable report. The JSON form omits wall-clock times, so
// two runs with the same seed produce identical bytes; the text form keeps
// the times for interactive use.

#include "kinsym/hierarchy.hpp"
#include "kinsym/poisson.hpp"
#include "kinsym/randexpr.hpp"
#include "kinsym/scenario.hpp"
#include "kinsym/symplectic.hpp"

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace kinsym::report {

using symexpr::Expr;

enum class Verdict { Pass, Fail, Degenerate, Info, Indeterminate };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Degenerate: return "degenerate";
    case Verdict::Info: return "info";
    default: return "indeterminate";
  }
}

inline Verdict verdict_from_name(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "degenerate") return Verdict::Degenerate;
  if (s == "info") return Verdict::Info;
  if (s == "indeterminate") return Verdict::Indeterminate;
  throw std::invalid_argument("unknown verdict: " + s);
}

struct CheckRecord {
  std::string id;
  std::string identity;
  Verdict verdict = Verdict::Pass;
  std::string witness;  // sample point and value when an identity failed
  std::string detail;
  double wall_ms = 0.0;
};

struct Summary {
  int pass = 0;
  int fail = 0;
  int degenerate = 0;
  int info = 0;
  int indeterminate = 0;
  int total() const { return pass + fail + degenerate + info + indeterminate; }
};

struct Report {
  std::string scenario;
  std::uint64_t seed = symexpr::kDefaultSeed;
  int depth = 0;
  int samples = 0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  bool validated = true;
  bool convention_measured = false;
  double convention_constant = std::numeric_limits<double>::quiet_NaN();
  std::vector<CheckRecord> checks;

  Summary summary() const {
    Summary s;
    for (const CheckRecord& c : checks) {
      switch (c.verdict) {
        case Verdict::Pass: ++s.pass; break;
        case Verdict::Fail: ++s.fail; break;
        case Verdict::Degenerate: ++s.degenerate; break;
        case Verdict::Info: ++s.info; break;
        case Verdict::Indeterminate: ++s.indeterminate; break;
      }
    }
    return s;
  }
};

// 0 all identities hold, 1 some identity failed or could not be decided,
// 2 the structure is degenerate on this scenario
inline int exit_code(const Report& r) {
  Summary s = r.summary();
  if (s.degenerate > 0) return 2;
  if (s.fail > 0 || s.indeterminate > 0) return 1;
  return 0;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

class Recorder {
 public:
  Recorder(Report& rep, const symexpr::IdentityConfig& cfg) : rep_(rep), cfg_(cfg) {}

  // runs fn, times it, and files the outcome; fn returns the ZeroCheck of the
  // identity's residual
  template <class Fn>
  void check(const std::string& id, const std::string& identity, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    CheckRecord rec{id, identity, Verdict::Pass, "", "", 0.0};
    try {
      symexpr::ZeroCheck c = fn();
      if (!c.zero) {
        rec.verdict = Verdict::Fail;
        rec.witness = symexpr::describe_witness(c);
      }
    } catch (const symexpr::IndeterminateError& e) {
      rec.verdict = Verdict::Indeterminate;
      rec.detail = e.what();
    } catch (const symexpr::InvariantViolationError& e) {
      rec.verdict = Verdict::Fail;
      rec.witness = symexpr::describe_witness(e.check());
      rec.detail = e.what();
    } catch (const symexpr::DegenerateError& e) {
      rec.verdict = Verdict::Degenerate;
      rec.detail = e.what();
    }
    rec.wall_ms = elapsed_ms(t0);
    rep_.checks.push_back(std::move(rec));
  }

  void info(const std::string& id, const std::string& identity, const std::string& detail) {
    rep_.checks.push_back({id, identity, Verdict::Info, "", detail, 0.0});
  }

  void degenerate(const std::string& id, const std::string& identity,
                  const std::string& detail, double wall_ms) {
    rep_.checks.push_back({id, identity, Verdict::Degenerate, "", detail, wall_ms});
  }

  CheckRecord& back() { return rep_.checks.back(); }
  bool last_passed() const { return rep_.checks.back().verdict == Verdict::Pass; }

 private:
  Report& rep_;
  const symexpr::IdentityConfig& cfg_;
};

// first failing component check, or a pass
template <class It, class Fn>
symexpr::ZeroCheck first_failure(It begin, It end, Fn&& fn) {
  for (It it = begin; it != end; ++it) {
    symexpr::ZeroCheck c = fn(*it);
    if (!c.zero) return c;
  }
  return {true, {}, 0.0, 0.0, 0, 0};
}

}  // namespace detail

inline Report run_report(const flow::FlowScenario& s, int depth = 4,
                         const symexpr::IdentityConfig& cfg = {}, bool validated = true) {
  using namespace vectorcalc;
  using symexpr::add;
  using symexpr::constant;
  using symexpr::is_zero;
  using symexpr::mul;
  using symexpr::neg;
  using symexpr::render;
  using symexpr::simplify;
  using symexpr::sub;

  Report rep;
  rep.scenario = s.name;
  rep.seed = cfg.seed;
  rep.depth = depth;
  rep.samples = cfg.samples;
  rep.abs_tol = cfg.abs_tol;
  rep.rel_tol = cfg.rel_tol;
  rep.validated = validated;
  detail::Recorder rec(rep, cfg);

  // the standing hypotheses on (v, B, phi)
  for (const flow::NamedCheck& nc : flow::hypothesis_checks(s, cfg))
    rec.check(nc.id, nc.identity, nc.run);
  for (size_t i = 0; i < s.invariants.size(); ++i)
    rec.check("invariants.i" + std::to_string(i + 1),
              "d_t f + v.grad(f) = 0 for declared invariant " + render(s.invariants[i]),
              [&] { return is_zero(material_derivative(s.invariants[i], s.v), cfg); });

  // the two-form itself: closedness and the suspension as its Hamiltonian flow
  symplectic::TwoFormExt omega = symplectic::build_omega(s);
  symplectic::ThreeFormExt dw = symplectic::exterior_derivative(omega);
  for (int m = 0; m < 4; ++m)
    rec.check(std::string("omega.closure.") + symplectic::triple_name(m), "dOmega = 0",
              [&] { return is_zero(dw.component[m], cfg); });
  rec.check("omega.suspension", "i(d_t + v)Omega = d(phi)", [&] {
    symplectic::OneFormExt lhs = symplectic::interior_product(suspension(s.v), omega);
    symplectic::OneFormExt dphi = symplectic::differential(s.phi);
    symplectic::OneFormExt res;
    for (int nu = 0; nu < 4; ++nu) res.c[nu] = sub(lhs.c[nu], dphi.c[nu]);
    return symplectic::is_zero(res, cfg);
  });

  // volume: rho must not vanish identically, and Omega^Omega must be a
  // constant multiple of rho dt^dx^dy^dz (the constant is recorded, not
  // asserted)
  Expr rho = symplectic::liouville_density(s);
  {
    auto t0 = std::chrono::steady_clock::now();
    symexpr::ZeroCheck c = is_zero(rho, cfg);
    if (c.zero) {
      rec.degenerate("volume.density", "rho = -B.grad(phi) not identically 0",
                     "B.grad(phi) vanishes identically; the two-form carries no volume "
                     "and the construction stops here",
                     detail::elapsed_ms(t0));
      return rep;
    }
    rep.checks.push_back({"volume.density", "rho = -B.grad(phi) not identically 0",
                          Verdict::Pass, "", "", detail::elapsed_ms(t0)});
  }
  Expr ratio = simplify(symexpr::div(symplectic::wedge_square(omega).c, rho));
  rec.check("volume.proportionality", "d(Omega^Omega / (rho dt^dx^dy^dz)) = 0", [&] {
    int axes[4] = {0, 1, 2, 3};
    return detail::first_failure(axes, axes + 4, [&](int a) {
      return is_zero(symplectic::d_axis(ratio, a), cfg);
    });
  });
  if (rec.last_passed()) {
    symexpr::PointSampler sampler(cfg);
    symexpr::EvalOptions opt{cfg.min_denominator};
    for (int tries = 0; tries < cfg.samples; ++tries) {
      try {
        rep.convention_constant = symexpr::eval_at(ratio, sampler.next(), opt);
        rep.convention_measured = true;
        break;
      } catch (const symexpr::EvalError&) {
      }
    }
    if (rep.convention_measured) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", rep.convention_constant);
      rec.info("volume.convention_constant", "Omega^Omega = c rho dt^dx^dy^dz",
               std::string("c = ") + buf);
    }
  }
  rec.check("volume.u0_phi", "U_0(phi) = -1", [&] {
    return is_zero(add(act(hierarchy::u0(s, cfg), s.phi), constant(1)), cfg);
  });

  // primitive one-form, when the scenario supplies a vector potential
  if (s.A && (s.psi || s.p_over_rho)) {
    symplectic::ExactnessResult er = symplectic::exactness_residual(s);
    rec.info("exact.psi", "psi in theta = -(psi dt + A.dx)", "psi = " + render(er.psi));
    rec.check("exact.curl", "curl(A) = B",
              [&] { return vectorcalc::is_zero(er.curl_residual, cfg); });
    rec.check("exact.gauge", "d_t A - v x curl(A) = grad(phi + psi)",
              [&] { return vectorcalc::is_zero(er.gauge_residual, cfg); });
    rec.check("exact.form", "Omega = -d(psi dt + A.dx)",
              [&] { return symplectic::is_zero(er.form_residual, cfg); });
  } else if (s.A) {
    rec.info("exact.skipped", "Omega = -d(psi dt + A.dx)",
             "A is given but neither psi nor p/rho is; no primitive to check");
  }

  // admissibility of the seed function
  {
    hierarchy::AdmissibilityReport ar = hierarchy::check_h_admissible(s.h, s, cfg);
    auto t0 = std::chrono::steady_clock::now();
    CheckRecord r{"hierarchy.h_admissible", "h conserved, or dh/dt conserved and dependent on phi",
                  Verdict::Pass, "", "", 0.0};
    if (ar.strictly_admissible()) {
      r.detail = "strictly admissible";
    } else if (ar.weakly_admissible()) {
      r.detail = "weakly admissible: dh/dt is conserved and functionally dependent on phi";
    } else {
      r.verdict = Verdict::Fail;
      r.witness = symexpr::describe_witness(ar.conserved.zero ? ar.weakly_conserved : ar.conserved);
      r.detail = ar.dependence_witness ? *ar.dependence_witness : "dh/dt is not conserved";
    }
    r.wall_ms = detail::elapsed_ms(t0);
    rep.checks.push_back(std::move(r));
  }

  // the ladder of vertical fields and its per-level identities
  std::vector<hierarchy::Level> levels;
  bool have_levels = false;
  try {
    levels = hierarchy::generate(s, depth, cfg, hierarchy::GenerateMode::Collect);
    have_levels = true;
  } catch (const symexpr::IndeterminateError& e) {
    rep.checks.push_back({"hierarchy.generate", "ladder of vertical fields", Verdict::Indeterminate,
                          "", e.what(), 0.0});
  }

  if (have_levels) {
    const VectorField& U0 = levels[0].W;
    for (const hierarchy::Level& lv : levels) {
      std::string base = "hierarchy.k" + std::to_string(lv.k);
      std::string kn = std::to_string(lv.k);
      if (lv.truncated) {
        rec.info("hierarchy.truncation", "h_" + kn + " = 0",
                 "the ladder truncates at level " + kn + "; all higher levels vanish");
        break;
      }
      ExtendedField Uk = hierarchy::assemble_Uk(lv, s);
      if (lv.k >= 1) {
        rec.info(base + ".values", "level " + kn,
                 "h = " + render(lv.h) + "; W = (" + render(lv.W.x) + ", " + render(lv.W.y) +
                     ", " + render(lv.W.z) + "); xi = " + render(lv.xi));
        rec.check(base + ".conserved", "d_t h_" + kn + " + v.grad(h_" + kn + ") = 0",
                  [&] { return is_zero(material_derivative(lv.h, s.v), cfg); });
      }
      rec.check(base + ".invariance", "[d_t + v, W_" + kn + "] = 0", [&] {
        return vectorcalc::is_zero(ext_bracket(suspension(s.v), ExtendedField::vertical(lv.W)),
                                   cfg);
      });
      rec.check(base + ".weighted_div", "div(rho W_" + kn + ") = 0",
                [&] { return is_zero(weighted_div(lv.W, rho), cfg); });
      if (lv.k >= 2)
        rec.check(base + ".gradient_form",
                  "W_" + kn + " = rho^-1 grad(phi) x grad(h_" + kn + ") . grad",
                  [&] { return vectorcalc::is_zero(vsub(lv.W, hierarchy::w1(lv.h, s)), cfg); });
      if (lv.k >= 1)
        rec.check(base + ".xi", "xi_" + kn + " = -U_0(h_" + kn + ")",
                  [&] { return is_zero(add(lv.xi, act(U0, lv.h)), cfg); });
      rec.check(base + ".hamiltonian",
                lv.k == 0 ? std::string("i(U_0)Omega = dt")
                          : "i(U_" + kn + ")Omega = d(h_" + kn + ")",
                [&] {
                  symplectic::OneFormExt lhs = symplectic::interior_product(Uk, omega);
                  symplectic::OneFormExt dh = symplectic::differential(lv.h);
                  symplectic::OneFormExt res;
                  for (int nu = 0; nu < 4; ++nu) res.c[nu] = sub(lhs.c[nu], dh.c[nu]);
                  return symplectic::is_zero(res, cfg);
                });
      rec.check(base + ".symmetry",
                "[d_t + v, U_" + kn + "] = (d_t xi_" + kn + " + v.grad(xi_" + kn + "))(d_t + v)",
                [&] { return vectorcalc::is_zero(hierarchy::symmetry_residual(Uk, s), cfg); });
    }

    // commutators of ladder fields close on ladder-type fields
    int top = 0;
    for (const hierarchy::Level& lv : levels)
      if (!lv.truncated) top = lv.k;
    for (int k = 1; k <= top; ++k)
      for (int l = k + 1; l <= top; ++l) {
        std::string id =
            "hierarchy.bracket.w" + std::to_string(k) + "_w" + std::to_string(l);
        std::string h_lk;
        rec.check(id,
                  "[W_" + std::to_string(k) + ", W_" + std::to_string(l) +
                      "] = rho^-1 grad(phi) x grad(h_lk) . grad",
                  [&] {
                    hierarchy::BracketLevelResult r = hierarchy::bracket_level(levels, k, l, s, cfg);
                    h_lk = render(r.h_lk);
                    return r.consistency;
                  });
        if (!h_lk.empty() && rec.back().detail.empty()) rec.back().detail = "h_lk = " + h_lk;
      }
  }

  // the splitting along the suspension is flat: horizontal lifts commute up
  // to horizontal terms
  rec.check("connection.curvature", "vertical part of [f(d_t + v), g(d_t + v)] = 0", [&] {
    randexpr::ExprGen gen(cfg.seed + 101);
    std::vector<int> runs(20);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      ExtendedField E{f, scale(f, s.v)};
      ExtendedField F{g, scale(g, s.v)};
      return vectorcalc::is_zero(hierarchy::curvature(E, F, s), cfg);
    });
  });

  // the bracket algebra on functions
  randexpr::ExprGen gen(cfg.seed);
  const poisson::BracketKind kinds[3] = {poisson::BracketKind::Omega, poisson::BracketKind::Phi,
                                         poisson::BracketKind::Gauge};
  for (poisson::BracketKind kind : kinds)
    rec.check(std::string("poisson.jacobi.") + poisson::bracket_name(kind),
              "cyclic sum {{f,g},h} = 0", [&] {
                std::vector<int> runs(20);
                return detail::first_failure(runs.begin(), runs.end(), [&](int) {
                  Expr f = gen.poly4(3, 2);
                  Expr g = gen.poly4(3, 2);
                  Expr h = gen.poly4(3, 2);
                  return is_zero(poisson::jacobi_residual(kind, f, g, h, s, cfg), cfg);
                });
              });
  rec.check("poisson.antisymmetry", "{f,g} + {g,f} = 0", [&] {
    std::vector<int> runs(10);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      return detail::first_failure(kinds, kinds + 3, [&](poisson::BracketKind kind) {
        return is_zero(add(poisson::bracket(kind, f, g, s, cfg),
                           poisson::bracket(kind, g, f, s, cfg)),
                       cfg);
      });
    });
  });
  rec.check("poisson.bilinearity", "{a f + b g, h} = a{f,h} + b{g,h}", [&] {
    std::vector<int> runs(10);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      Expr h = gen.poly4(3, 2);
      Expr a = constant(gen.small_int_nonzero());
      Expr b = constant(gen.small_int_nonzero());
      return detail::first_failure(kinds, kinds + 3, [&](poisson::BracketKind kind) {
        Expr lhs = poisson::bracket(kind, add(mul(a, f), mul(b, g)), h, s, cfg);
        Expr rhs = add(mul(a, poisson::bracket(kind, f, h, s, cfg)),
                       mul(b, poisson::bracket(kind, g, h, s, cfg)));
        return is_zero(sub(lhs, rhs), cfg);
      });
    });
  });
  rec.check("poisson.leibniz", "{f, g h} = g{f,h} + {f,g}h", [&] {
    std::vector<int> runs(10);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      Expr h = gen.poly4(3, 2);
      return detail::first_failure(kinds, kinds + 3, [&](poisson::BracketKind kind) {
        Expr lhs = poisson::bracket(kind, f, mul(g, h), s, cfg);
        Expr rhs = add(mul(g, poisson::bracket(kind, f, h, s, cfg)),
                       mul(poisson::bracket(kind, f, g, s, cfg), h));
        return is_zero(sub(lhs, rhs), cfg);
      });
    });
  });
  rec.check("poisson.decomposition", "{f,g}_Omega = {f,g}_Phi + {f,g}_Gauge", [&] {
    std::vector<int> runs(20);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      Expr res = sub(poisson::bracket(poisson::BracketKind::Omega, f, g, s, cfg),
                     add(poisson::bracket(poisson::BracketKind::Phi, f, g, s, cfg),
                         poisson::bracket(poisson::BracketKind::Gauge, f, g, s, cfg)));
      return is_zero(res, cfg);
    });
  });
  if (!s.invariants.empty())
    rec.check("poisson.conserved_reduction", "{f,g}_Omega = {f,g}_Phi for conserved f, g", [&] {
      std::vector<int> runs(10);
      return detail::first_failure(runs.begin(), runs.end(), [&](int) {
        Expr f = gen.poly(s.invariants, 3, 2);
        Expr g = gen.poly(s.invariants, 3, 2);
        return is_zero(sub(poisson::bracket(poisson::BracketKind::Omega, f, g, s, cfg),
                           poisson::bracket(poisson::BracketKind::Phi, f, g, s, cfg)),
                       cfg);
      });
    });
  rec.check("poisson.phi_t", "{phi, t}_Omega = 1", [&] {
    return is_zero(sub(poisson::bracket(poisson::BracketKind::Omega, s.phi, symexpr::t(), s, cfg),
                       constant(1)),
                   cfg);
  });

  // the bracket realizes commutators of Hamiltonian fields, with the fields
  // solved from the two-form rather than taken from the closed form
  rec.check("poisson.isomorphism.random", "[U_f, U_g] = U_{{f,g}}", [&] {
    std::vector<int> runs(5);
    return detail::first_failure(runs.begin(), runs.end(), [&](int) {
      Expr f = gen.poly4(3, 2);
      Expr g = gen.poly4(3, 2);
      return vectorcalc::is_zero(poisson::isomorphism_residual(f, g, s, cfg), cfg);
    });
  });
  if (!s.invariants.empty())
    rec.check("poisson.isomorphism.conserved", "[U_f, U_g] = U_{{f,g}} for conserved f, g", [&] {
      std::vector<int> runs(5);
      return detail::first_failure(runs.begin(), runs.end(), [&](int) {
        Expr f = gen.poly(s.invariants, 3, 2);
        Expr g = gen.poly(s.invariants, 3, 2);
        return vectorcalc::is_zero(poisson::isomorphism_residual(f, g, s, cfg), cfg);
      });
    });

  if (have_levels) {
    int top = 0;
    for (const hierarchy::Level& lv : levels)
      if (!lv.truncated) top = lv.k;
    if (top >= 1)
      rec.check("poisson.isomorphism.ladder", "[U_phi, U_h1] = U_{{phi,h_1}}", [&] {
        return vectorcalc::is_zero(poisson::isomorphism_residual(s.phi, levels[1].h, s, cfg),
                                   cfg);
      });
    for (int k = 1; k <= top; ++k)
      for (int l = k; l <= top; ++l)
        rec.check("poisson.involutivity.h" + std::to_string(k) + "_h" + std::to_string(l),
                  "{h_" + std::to_string(k) + ", h_" + std::to_string(l) + "}_Gauge = 0", [&] {
                    return is_zero(poisson::bracket(poisson::BracketKind::Gauge, levels[k].h,
                                                    levels[l].h, s, cfg),
                                   cfg);
                  });
    for (int k = 1; k <= top; ++k)
      rec.check("poisson.xi_relation.k" + std::to_string(k),
                "{h_" + std::to_string(k) + ", t}_Omega = xi_" + std::to_string(k), [&] {
                  return is_zero(sub(poisson::bracket(poisson::BracketKind::Omega, levels[k].h,
                                                      symexpr::t(), s, cfg),
                                     levels[k].xi),
                                 cfg);
                });
  }

  return rep;
}

// ---------------------------------------------------------------------------
// planar stream-function scenarios

// For v = (-psi_y, psi_x) on (t,x,y), the lifted two-form
//   Omega_2 = (phi2_x + w psi_x) dt^dx + (phi2_y + w psi_y) dt^dy + w dx^dy
// with w = laplacian(psi) is closed exactly when the vorticity transport
// equation d_t w + v.grad(w) = 0 holds; the report checks both sides and the
// identity tying them together.
inline Report check_2d(const flow::Scenario2D& s2, const symexpr::IdentityConfig& cfg = {}) {
  using symexpr::add;
  using symexpr::is_zero;
  using symexpr::mul;
  using symexpr::neg;
  using symexpr::render;
  using symexpr::simplify;
  using symexpr::sub;

  Report rep;
  rep.scenario = s2.name;
  rep.seed = cfg.seed;
  rep.depth = 0;
  rep.samples = cfg.samples;
  rep.abs_tol = cfg.abs_tol;
  rep.rel_tol = cfg.rel_tol;
  detail::Recorder rec(rep, cfg);

  auto ddt = [](const Expr& f) { return symexpr::differentiate(f, symexpr::Var::t); };
  auto ddx = [](const Expr& f) { return symexpr::differentiate(f, symexpr::Var::x); };
  auto ddy = [](const Expr& f) { return symexpr::differentiate(f, symexpr::Var::y); };

  Expr vx = simplify(neg(ddy(s2.psi)));
  Expr vy = simplify(ddx(s2.psi));
  Expr w = simplify(add(ddx(ddx(s2.psi)), ddy(ddy(s2.psi))));
  rec.info("lift.velocity", "v = (-psi_y, psi_x)",
           "v = (" + render(vx) + ", " + render(vy) + ")");
  rec.info("lift.vorticity", "w = laplacian(psi)", "w = " + render(w));

  Expr transport = simplify(add(ddt(w), add(mul(vx, ddx(w)), mul(vy, ddy(w)))));
  rec.check("transport.vorticity", "d_t w + v.grad(w) = 0",
            [&] { return is_zero(transport, cfg); });

  Expr w01 = add(ddx(s2.phi2), mul(w, ddx(s2.psi)));
  Expr w02 = add(ddy(s2.phi2), mul(w, ddy(s2.psi)));
  Expr w12 = w;
  Expr closure = simplify(add(ddt(w12), sub(ddy(w01), ddx(w02))));
  rec.check("form.closure", "d(Omega_2) = 0", [&] { return is_zero(closure, cfg); });
  rec.check("form.equivalence", "d(Omega_2) = (d_t w + v.grad(w)) dt^dx^dy",
            [&] { return is_zero(sub(closure, transport), cfg); });

  rec.check("phi2.advection", "d_t phi2 + v.grad(phi2) = 0", [&] {
    return is_zero(add(ddt(s2.phi2), add(mul(vx, ddx(s2.phi2)), mul(vy, ddy(s2.phi2)))), cfg);
  });
  rec.check("form.suspension", "i(d_t + v)Omega_2 = d(phi2)", [&] {
    Expr r0 = sub(sub(neg(mul(vx, w01)), mul(vy, w02)), ddt(s2.phi2));
    Expr r1 = sub(sub(w01, mul(vy, w12)), ddx(s2.phi2));
    Expr r2 = sub(add(w02, mul(vx, w12)), ddy(s2.phi2));
    Expr rs[3] = {simplify(r0), simplify(r1), simplify(r2)};
    return detail::first_failure(rs, rs + 3, [&](const Expr& r) { return is_zero(r, cfg); });
  });
  return rep;
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& c : r.checks)
    checks.push_back({{"id", c.id},
                      {"identity", c.identity},
                      {"verdict", verdict_name(c.verdict)},
                      {"witness", c.witness},
                      {"detail", c.detail}});
  Summary s = r.summary();
  return {{"scenario", r.scenario},
          {"seed", r.seed},
          {"depth", r.depth},
          {"samples", r.samples},
          {"abs_tol", r.abs_tol},
          {"rel_tol", r.rel_tol},
          {"validated", r.validated},
          {"convention_constant",
           r.convention_measured ? nlohmann::json(r.convention_constant) : nlohmann::json()},
          {"checks", std::move(checks)},
          {"summary",
           {{"pass", s.pass},
            {"fail", s.fail},
            {"degenerate", s.degenerate},
            {"info", s.info},
            {"indeterminate", s.indeterminate},
            {"total", s.total()}}}};
}

inline Report from_json(const nlohmann::json& j) {
  Report r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.depth = j.at("depth").get<int>();
  r.samples = j.at("samples").get<int>();
  r.abs_tol = j.at("abs_tol").get<double>();
  r.rel_tol = j.at("rel_tol").get<double>();
  r.validated = j.at("validated").get<bool>();
  if (!j.at("convention_constant").is_null()) {
    r.convention_measured = true;
    r.convention_constant = j.at("convention_constant").get<double>();
  }
  for (const nlohmann::json& c : j.at("checks")) {
    CheckRecord rec;
    rec.id = c.at("id").get<std::string>();
    rec.identity = c.at("identity").get<std::string>();
    rec.verdict = verdict_from_name(c.at("verdict").get<std::string>());
    rec.witness = c.at("witness").get<std::string>();
    rec.detail = c.at("detail").get<std::string>();
    r.checks.push_back(std::move(rec));
  }
  Summary s = r.summary();
  const nlohmann::json& js = j.at("summary");
  if (js.at("pass").get<int>() != s.pass || js.at("fail").get<int>() != s.fail ||
      js.at("degenerate").get<int>() != s.degenerate || js.at("info").get<int>() != s.info ||
      js.at("indeterminate").get<int>() != s.indeterminate ||
      js.at("total").get<int>() != s.total())
    throw std::runtime_error("report summary does not match its check records");
  return r;
}

inline std::string render_text(const Report& r, bool with_times = true) {
  auto fmt = [](const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return std::string(buf);
  };
  std::string out = "scenario " + r.scenario + ": seed=" + std::to_string(r.seed) +
                    " depth=" + std::to_string(r.depth) +
                    " samples=" + std::to_string(r.samples) + " abs_tol=" +
                    fmt("%g", r.abs_tol) + " rel_tol=" + fmt("%g", r.rel_tol) +
                    " validated=" + (r.validated ? "yes" : "no") + "\n";
  for (const CheckRecord& c : r.checks) {
    std::string tag = verdict_name(c.verdict);
    for (char& ch : tag) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out += "[" + tag + "] " + c.id + ": " + c.identity;
    if (!c.witness.empty()) out += "  witness " + c.witness;
    if (!c.detail.empty()) out += "  [" + c.detail + "]";
    if (with_times) out += " (" + fmt("%.1f", c.wall_ms) + " ms)";
    out += "\n";
  }
  if (r.convention_measured)
    out += "convention constant: " + fmt("%g", r.convention_constant) + "\n";
  Summary s = r.summary();
  int code = exit_code(r);
  out += "summary: pass=" + std::to_string(s.pass) + " fail=" + std::to_string(s.fail) +
         " degenerate=" + std::to_string(s.degenerate) + " info=" + std::to_string(s.info) +
         " indeterminate=" + std::to_string(s.indeterminate) + " -> " +
         (code == 0 ? "OK" : code == 2 ? "DEGENERATE" : "VIOLATED") + "\n";
  return out;
}

}  // namespace kinsym::report
