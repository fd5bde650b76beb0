#include "kinsym/symplectic.hpp"
#include "kinsym/randexpr.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace kinsym;
using namespace kinsym::symexpr;
using namespace kinsym::vectorcalc;
using namespace kinsym::symplectic;
using kinsym::flow::FlowScenario;
using kinsym::flow::find_builtin;

namespace {

const FlowScenario& shear() {
  static FlowScenario s = *find_builtin("SHEAR");
  return s;
}
const FlowScenario& rotation() {
  static FlowScenario s = *find_builtin("ROTATION");
  return s;
}

}  // namespace

TEST_CASE("structure form carries the transported field in its spatial block") {
  TwoFormExt w = build_omega(shear());
  // time-space row: grad(phi) + v x B with B = e_y, v = z e_x gives
  // (0,1,0) + (z,0,0)x(0,1,0) = (0,1,0) + (0,0,z)
  REQUIRE(is_structural_zero(w.w[0][1]));
  REQUIRE(is_constant(w.w[0][2], 1));
  REQUIRE(structurally_equal(w.w[0][3], z()));
  // spatial block holds the flux of B: dz^dx carries B_y
  REQUIRE(is_structural_zero(w.w[2][3]));
  REQUIRE(structurally_equal(w.w[3][1], one()));
  REQUIRE(is_structural_zero(w.w[1][2]));
  // antisymmetry
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      REQUIRE(is_zero(add(w.w[a][b], w.w[b][a])).zero);
}

TEST_CASE("structure form is closed for frozen transported fields") {
  for (const char* name : {"SHEAR", "ROTATION", "BELTRAMI-DEGENERATE"}) {
    TwoFormExt w = build_omega(*find_builtin(name));
    for (auto& [tag, c] : check_closed(w)) {
      INFO(name << " " << tag);
      REQUIRE(c.zero);
    }
  }
}

TEST_CASE("closure fails when the transported field is not frozen") {
  TwoFormExt w = build_omega(*find_builtin("NONFROZEN"));
  bool any_fail = false;
  for (auto& [tag, c] : check_closed(w)) any_fail = any_fail || !c.zero;
  REQUIRE(any_fail);
}

TEST_CASE("exterior derivative squares to zero") {
  kinsym::randexpr::ExprGen gen(99);
  OneFormExt th;
  for (int a = 0; a < 4; ++a) th.c[a] = gen.poly4(3, 2);
  ThreeFormExt dd = exterior_derivative(exterior_derivative(th));
  for (int m = 0; m < 4; ++m) REQUIRE(is_zero(dd.component[m]).zero);
}

TEST_CASE("the suspension contracts to the differential of phi") {
  for (const char* name : {"SHEAR", "ROTATION"}) {
    const FlowScenario s = *find_builtin(name);
    OneFormExt got = interior_product(suspension(s.v), build_omega(s));
    OneFormExt want = differential(s.phi);
    for (int a = 0; a < 4; ++a) {
      INFO(name << " axis " << a);
      REQUIRE(is_zero(sub(got.c[a], want.c[a])).zero);
    }
  }
}

TEST_CASE("pfaffian and wedge square") {
  TwoFormExt w = build_omega(shear());
  // by hand: Pf = w01 w23 - w02 w13 + w03 w12 = 0 - 1*(-1) + 0 = 1
  REQUIRE(is_zero(sub(pfaffian(w), one())).zero);
  REQUIRE(is_zero(sub(wedge_square(w).c, constant(2))).zero);

  // the Liouville density is -B.grad(phi)
  Expr rho = liouville_density(shear());
  REQUIRE(is_zero(add(rho, one())).zero);

  // wedge_square / rho is the same constant for every nondegenerate flow
  for (const char* name : {"SHEAR", "ROTATION"}) {
    const FlowScenario s = *find_builtin(name);
    Expr ratio_diff = sub(wedge_square(build_omega(s)).c,
                          mul(constant(-2), liouville_density(s)));
    INFO(name);
    REQUIRE(is_zero(ratio_diff).zero);
  }
}

TEST_CASE("degenerate flows have vanishing density") {
  const FlowScenario s = *find_builtin("BELTRAMI-DEGENERATE");
  REQUIRE(is_zero(liouville_density(s)).zero);
  REQUIRE(is_zero(pfaffian(build_omega(s))).zero);
}

TEST_CASE("field inversion solves the interior product equation") {
  kinsym::randexpr::ExprGen gen(1234);
  for (const char* name : {"SHEAR", "ROTATION"}) {
    const FlowScenario s = *find_builtin(name);
    TwoFormExt w = build_omega(s);
    for (int i = 0; i < 5; ++i) {
      Expr f = gen.poly4(3, 2);
      ExtendedField V = hamiltonian_field(f, w);
      OneFormExt back = interior_product(V, w);
      OneFormExt df = differential(f);
      for (int a = 0; a < 4; ++a) {
        INFO(name << " trial " << i << " axis " << a);
        REQUIRE(is_zero(sub(back.c[a], df.c[a])).zero);
      }
    }
  }
}

TEST_CASE("field inversion matches the closed-form image") {
  kinsym::randexpr::ExprGen gen(555);
  for (const char* name : {"SHEAR", "ROTATION", "NONFROZEN"}) {
    const FlowScenario s = *find_builtin(name);
    TwoFormExt w = build_omega(s);
    std::vector<Expr> probes = {s.h, t(), gen.poly4(3, 2)};
    for (const Expr& f : probes) {
      ExtendedField solved = hamiltonian_field(f, w);
      ExtendedField closed = closed_form_U(f, s);
      INFO(name << " f = " << render(f));
      REQUIRE(vectorcalc::is_zero(ext_sub(solved, closed)).zero);
    }
  }
}

TEST_CASE("U_0 advances time and moves along the transported field") {
  const FlowScenario s = shear();
  ExtendedField u0 = closed_form_U(t(), s);
  // B is spatial so B(t) = 0, leaving u = rho^-1 B; here rho = -1
  REQUIRE(is_zero(u0.xi).zero);
  REQUIRE(vectorcalc::is_zero(vsub(u0.u, scale(constant(-1), s.B))).zero);
  // and it sends phi to -1 wherever the density convention says so
  REQUIRE(is_zero(add(act(u0, s.phi), one())).zero);
}

TEST_CASE("degenerate structure rejects inversion") {
  const FlowScenario s = *find_builtin("BELTRAMI-DEGENERATE");
  TwoFormExt w = build_omega(s);
  REQUIRE_THROWS_AS(hamiltonian_field(x(), w), DegenerateError);
}

TEST_CASE("exactness data for the rotation flow") {
  ExactnessResult r = exactness_residual(rotation());
  REQUIRE(vectorcalc::is_zero(r.curl_residual).zero);
  REQUIRE(vectorcalc::is_zero(r.gauge_residual).zero);
  REQUIRE(is_zero(r.form_residual).zero);
}

TEST_CASE("bernoulli potential requires pressure data") {
  FlowScenario s = shear();
  REQUIRE_THROWS_AS(euler_psi(s), std::invalid_argument);
  s.p_over_rho = zero();
  REQUIRE_NOTHROW(euler_psi(s));
  // with p/rho = 0: psi = -(phi + |v|^2/2) = -(y + z^2/2)
  Expr want = neg(add(y(), mul(constant(1, 2), pow(z(), 2))));
  REQUIRE(is_zero(sub(euler_psi(s), want)).zero);
}

TEST_CASE("exactness requires a vector potential") {
  REQUIRE_THROWS_AS(exactness_residual(shear()), std::invalid_argument);
}
