// End-to-end acceptance gate. Runs one scripted check per shipped guarantee,
// prints a [PASS]/[FAIL] line for each, and exits with the number of failures.
//
// usage: acceptance <path-to-cli> <path-to-scenario-dir>

#include "kinsym/poisson.hpp"
#include "kinsym/randexpr.hpp"
#include "kinsym/report.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

using namespace kinsym;
using namespace kinsym::symexpr;
using namespace kinsym::vectorcalc;
using kinsym::flow::FlowScenario;
using kinsym::flow::find_builtin;

namespace {

struct CmdResult {
  std::string out;
  int status = -1;
};

CmdResult run_cmd(const std::string& cmd) {
  CmdResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int rc = pclose(pipe);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::optional<double> central_diff(const Expr& e, Var v, SamplePoint p,
                                   double step) {
  SamplePoint lo = p, hi = p;
  switch (v) {
    case Var::t: lo.t -= step; hi.t += step; break;
    case Var::x: lo.x -= step; hi.x += step; break;
    case Var::y: lo.y -= step; hi.y += step; break;
    case Var::z: lo.z -= step; hi.z += step; break;
  }
  try {
    return (eval_at(e, hi) - eval_at(e, lo)) / (2 * step);
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli> <scenario-dir>\n");
    return 64;
  }
  const std::string cli = quoted(argv[1]);
  const std::string dir = argv[2];

  int failures = 0;
  auto criterion = [&](int n, const char* label,
                       const std::function<bool()>& fn) {
    bool ok = false;
    std::string why;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      why = e.what();
    }
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", n, label);
    if (!ok) {
      ++failures;
      if (!why.empty()) std::printf("        unexpected exception: %s\n", why.c_str());
    }
    std::fflush(stdout);
  };

  criterion(1, "flow hypotheses hold on SHEAR and ROTATION in under 1 s each", [&] {
    for (const char* name : {"SHEAR", "ROTATION"}) {
      const FlowScenario s = *find_builtin(name);
      auto t0 = Clock::now();
      bool ok = is_zero(divergence(s.v)).zero &&
                is_zero(divergence(s.B)).zero &&
                vectorcalc::is_zero(frozen_field_residual(s.B, s.v)).zero &&
                is_zero(material_derivative(s.phi, s.v)).zero;
      if (!ok || seconds_since(t0) >= 1.0) return false;
    }
    return true;
  });

  criterion(2, "closure, suspension contraction, volume scaling, and exactness in under 2 s", [&] {
    auto t0 = Clock::now();
    for (const char* name : {"SHEAR", "ROTATION"}) {
      const FlowScenario s = *find_builtin(name);
      symplectic::TwoFormExt w = symplectic::build_omega(s);
      for (auto& [tag, c] : symplectic::check_closed(w))
        if (!c.zero) return false;
      symplectic::OneFormExt got = symplectic::interior_product(suspension(s.v), w);
      symplectic::OneFormExt want = symplectic::differential(s.phi);
      for (int a = 0; a < 4; ++a)
        if (!is_zero(sub(got.c[a], want.c[a])).zero) return false;
      Expr ratio = mul(symplectic::wedge_square(w).c,
                       pow(symplectic::liouville_density(s), -1));
      for (int a = 0; a < 4; ++a)
        if (!is_zero(symplectic::d_axis(ratio, a)).zero) return false;
      if (std::abs(eval_at(ratio, {0.31, 0.47, 0.59, 0.73})) < 1e-9) return false;
    }
    symplectic::ExactnessResult er =
        symplectic::exactness_residual(*find_builtin("ROTATION"));
    if (!vectorcalc::is_zero(er.curl_residual).zero) return false;
    if (!vectorcalc::is_zero(er.gauge_residual).zero) return false;
    if (!symplectic::is_zero(er.form_residual).zero) return false;
    return seconds_since(t0) < 2.0;
  });

  criterion(3, "the shear ladder matches its closed form and truncates at level 3 in under 5 s", [&] {
    auto t0 = Clock::now();
    const FlowScenario s = *find_builtin("SHEAR");
    auto levels = hierarchy::generate(s, 4);
    if (levels.size() != 5) return false;

    Expr h2 = simplify(levels[2].h);
    if (!structurally_equal(h2, sub(x(), mul(t(), z())))) return false;
    if (!structurally_equal(simplify(levels[2].W.x), t())) return false;
    if (!is_structural_zero(simplify(levels[2].W.y))) return false;
    if (!is_constant(simplify(levels[2].W.z), 1)) return false;
    if (!levels[3].truncated || !is_structural_zero(levels[3].h)) return false;

    VectorField U0 = hierarchy::u0(s);
    if (!is_zero(add(act(U0, s.phi), one())).zero) return false;
    for (const auto& lv : levels) {
      if (lv.truncated) break;
      if (!is_zero(add(lv.xi, act(U0, lv.h))).zero) return false;
      if (lv.k >= 2) {
        if (!vectorcalc::is_zero(vsub(lv.W, hierarchy::w1(lv.h, s))).zero)
          return false;
        const VectorField& base = (lv.k == 2) ? levels[0].W : levels[lv.k - 1].W;
        if (!vectorcalc::is_zero(vsub(lv.W, lie_bracket3(levels[1].W, base))).zero)
          return false;
      }
    }
    return seconds_since(t0) < 5.0;
  });

  criterion(4, "weighted divergence: zero for admissible generators, a witness for h = x", [&] {
    for (const char* name : {"SHEAR", "ROTATION"}) {
      const FlowScenario s = *find_builtin(name);
      Expr rho = symplectic::liouville_density(s);
      auto levels = hierarchy::generate(s, 4);
      for (const auto& lv : levels) {
        if (lv.truncated) break;
        if (!is_zero(weighted_div(lv.W, rho)).zero) return false;
      }
    }
    FlowScenario strain = flow::load_scenario_file(dir + "/strain.scn");
    Expr srho = symplectic::liouville_density(strain);
    for (const auto& lv : hierarchy::generate(strain, 4)) {
      if (lv.truncated) break;
      if (!is_zero(weighted_div(lv.W, srho)).zero) return false;
    }

    FlowScenario bad = flow::load_scenario_file(dir + "/strain-bad-h.scn");
    ZeroCheck c = is_zero(weighted_div(hierarchy::w1(bad.h, bad),
                                       symplectic::liouville_density(bad)));
    if (c.zero || !c.witness.has_value()) return false;

    CmdResult r = run_cmd(cli + " check " + quoted(dir + "/strain-bad-h.scn") +
                          " --no-validate");
    return r.status == 1 &&
           contains(r.out, "[FAIL] hierarchy.k1.weighted_div") &&
           contains(r.out, "witness");
  });

  criterion(5, "the splitting is flat over 20 random pairs and every ladder field commutes with the motion", [&] {
    for (const char* name : {"SHEAR", "ROTATION"}) {
      const FlowScenario s = *find_builtin(name);
      kinsym::randexpr::ExprGen gen(name[0] == 'S' ? 501 : 502);
      for (int i = 0; i < 20; ++i) {
        Expr f = gen.poly4(2, 2), g = gen.poly4(2, 2);
        ExtendedField E{f, scale(f, s.v)};
        ExtendedField F{g, scale(g, s.v)};
        if (!vectorcalc::is_zero(hierarchy::curvature(E, F, s)).zero)
          return false;
      }
      ExtendedField D = suspension(s.v);
      for (const auto& lv : hierarchy::generate(s, 4)) {
        if (lv.truncated) break;
        if (!vectorcalc::is_zero(
                 ext_bracket(D, ExtendedField::vertical(lv.W)))
                 .zero)
          return false;
      }
    }
    return true;
  });

  criterion(6, "bracket algebra, decomposition, intertwining, and involutivity in under 10 s", [&] {
    auto t0 = Clock::now();
    const FlowScenario s = *find_builtin("SHEAR");
    kinsym::randexpr::ExprGen gen(20240);
    const poisson::BracketKind kinds[] = {poisson::BracketKind::Omega,
                                          poisson::BracketKind::Phi,
                                          poisson::BracketKind::Gauge};
    for (int i = 0; i < 20; ++i) {
      Expr f = gen.poly4(3, 2), g = gen.poly4(3, 2), h = gen.poly4(3, 2);
      Expr a = constant(gen.small_int_nonzero()), b = constant(gen.small_int_nonzero());
      for (poisson::BracketKind kind : kinds) {
        if (!is_zero(add(poisson::bracket(kind, f, g, s),
                         poisson::bracket(kind, g, f, s))).zero)
          return false;
        Expr lin = sub(poisson::bracket(kind, add(mul(a, f), mul(b, g)), h, s),
                       add(mul(a, poisson::bracket(kind, f, h, s)),
                           mul(b, poisson::bracket(kind, g, h, s))));
        if (!is_zero(lin).zero) return false;
        if (!is_zero(poisson::jacobi_residual(kind, f, g, h, s)).zero)
          return false;
      }
      Expr leib = sub(poisson::bracket(poisson::BracketKind::Phi, f, mul(g, h), s),
                      add(mul(g, poisson::bracket(poisson::BracketKind::Phi, f, h, s)),
                          mul(poisson::bracket(poisson::BracketKind::Phi, f, g, s), h)));
      if (!is_zero(leib).zero) return false;
      Expr split = sub(poisson::bracket(poisson::BracketKind::Omega, f, g, s),
                       add(poisson::bracket(poisson::BracketKind::Phi, f, g, s),
                           poisson::bracket(poisson::BracketKind::Gauge, f, g, s)));
      if (!is_zero(split).zero) return false;
    }

    for (int i = 0; i < 10; ++i) {
      Expr cf = gen.poly(s.invariants, 3, 2);
      Expr cg = gen.poly(s.invariants, 3, 2);
      if (!vectorcalc::is_zero(poisson::isomorphism_residual(cf, cg, s)).zero)
        return false;
    }

    auto levels = hierarchy::generate(s, 4);
    for (size_t k = 1; k < levels.size(); ++k) {
      if (levels[k].truncated) continue;
      for (size_t l = k; l < levels.size(); ++l) {
        if (levels[l].truncated) continue;
        if (!vectorcalc::is_zero(
                 poisson::isomorphism_residual(levels[k].h, levels[l].h, s))
                 .zero)
          return false;
      }
    }
    if (!vectorcalc::is_zero(poisson::isomorphism_residual(s.phi, s.h, s)).zero)
      return false;

    poisson::InvolutivityReport rep = poisson::involutivity_report(levels, s);
    if (!rep.all_zero || rep.rows.empty()) return false;
    return seconds_since(t0) < 10.0;
  });

  criterion(7, "the adjugate inversion agrees with the closed-form image on every catalog flow", [&] {
    for (const FlowScenario& s : flow::builtin_catalog()) {
      if (is_zero(symplectic::liouville_density(s)).zero) {
        try {
          symplectic::hamiltonian_field(s.h, symplectic::build_omega(s));
          return false;
        } catch (const DegenerateError&) {
          continue;
        }
      }
      ExtendedField solved =
          symplectic::hamiltonian_field(s.h, symplectic::build_omega(s));
      ExtendedField closed = symplectic::closed_form_U(s.h, s);
      if (!vectorcalc::is_zero(ext_sub(solved, closed)).zero) return false;
    }
    return true;
  });

  criterion(8, "negative controls: closure witness on NONFROZEN, exit 2 on the degenerate flow", [&] {
    CmdResult broken = run_cmd(cli + " check NONFROZEN --no-validate");
    if (broken.status != 1) return false;
    if (!contains(broken.out, "[FAIL] omega.closure")) return false;
    if (!contains(broken.out, "witness (t,x,y,z)=")) return false;
    CmdResult degen = run_cmd(cli + " check BELTRAMI-DEGENERATE");
    return degen.status == 2;
  });

  criterion(9, "planar lift: Taylor-Green passes, the drifting vorticity fails with a witness", [&] {
    CmdResult good = run_cmd(cli + " check2d " + quoted(dir + "/taylor-green-2d.scn"));
    if (good.status != 0) return false;
    CmdResult bad = run_cmd(cli + " check2d " + quoted(dir + "/drift-2d.scn"));
    return bad.status == 1 && contains(bad.out, "witness");
  });

  criterion(10, "two seeded JSON runs are byte-identical", [&] {
    const std::string cmd = cli + " check SHEAR --seed 7 --format json";
    CmdResult a = run_cmd(cmd);
    CmdResult b = run_cmd(cmd);
    return a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out;
  });

  criterion(11, "symbolic derivatives track central differences on 100 random expressions", [&] {
    kinsym::randexpr::ExprGen gen(97531);
    const SamplePoint pts[] = {{0.31, 0.92, -0.57, 0.44},
                               {-0.85, 0.13, 1.02, -0.66}};
    const double step = 1e-5, rel = 1e-6;
    int done = 0;
    for (int guard = 0; done < 100 && guard < 1000; ++guard) {
      Expr e = gen.ast_with_exp(3);
      int compared = 0;
      for (Var v : {Var::t, Var::x, Var::y, Var::z}) {
        Expr de = differentiate(e, v);
        for (const SamplePoint& p : pts) {
          auto fd = central_diff(e, v, p, step);
          if (!fd) continue;
          double sym;
          try {
            sym = eval_at(de, p);
          } catch (const EvalError&) {
            continue;
          }
          double scale = std::max({std::abs(sym), std::abs(*fd), 1.0});
          if (!std::isfinite(*fd) || scale > 1e8) continue;
          if (std::abs(sym - *fd) > rel * scale) return false;
          ++compared;
        }
      }
      if (compared > 0) ++done;
    }
    return done >= 100;
  });

  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures;
}
