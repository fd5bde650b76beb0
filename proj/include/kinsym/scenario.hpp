#pragma once

// Flow scenarios: a velocity field v, a frozen-in divergence-free field B, a
// conserved potential phi, and a Hamiltonian candidate h, all given as
// symbolic expressions. Scenarios come from the builtin catalog or from
// line-oriented text files:
//
//   # comment
//   name = SHEAR
//   v_x  = z
//   ...
//   phi  = y
//   h    = y*(x - t*z)
//
// Required keys: name, v_x, v_y, v_z, B_x, B_y, B_z, phi, h. Optional keys:
// A_x/A_y/A_z (potential one-form data), psi, p_over_rho, F_x/F_y/F_z.
// Unknown or duplicate keys are errors, as are partially given vector fields.

#include "kinsym/parse.hpp"
#include "kinsym/vectorcalc.hpp"

#include <fstream>
#include <map>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kinsym::flow {

using symexpr::Expr;
using vectorcalc::VectorField;

struct FlowScenario {
  std::string name;
  VectorField v;
  VectorField B;
  Expr phi;
  Expr h;
  std::optional<VectorField> A;
  std::optional<Expr> psi;
  std::optional<Expr> p_over_rho;
  std::optional<VectorField> F;
  // known Lagrangian invariants, used to synthesize conserved test functions
  std::vector<Expr> invariants;
  std::string description;
};

// a 2D stream-function scenario for the degenerate lifted structure
struct Scenario2D {
  std::string name;
  Expr psi;   // stream function psi(t,x,y)
  Expr phi2;  // Hamiltonian candidate phi2(t,x,y)
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string message, int line)
      : std::runtime_error("scenario line " + std::to_string(line) + ": " + message),
        line_(line) {}
  explicit ScenarioError(std::string message)
      : std::runtime_error(std::move(message)), line_(0) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::map<std::string, std::pair<std::string, int>> read_keyvals(
    std::istream& in, const std::vector<std::string>& allowed) {
  std::map<std::string, std::pair<std::string, int>> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("expected 'key = expression'", line_no);
    std::string key = trim(stripped.substr(0, eq));
    std::string val = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ScenarioError("empty key", line_no);
    if (val.empty()) throw ScenarioError("empty value for key '" + key + "'", line_no);
    bool known = false;
    for (const auto& a : allowed) known = known || a == key;
    if (!known) throw ScenarioError("unknown key '" + key + "'", line_no);
    if (kv.count(key)) throw ScenarioError("duplicate key '" + key + "'", line_no);
    kv[key] = {val, line_no};
  }
  return kv;
}

inline Expr parse_field(const std::map<std::string, std::pair<std::string, int>>& kv,
                        const std::string& key) {
  const auto& [text, line] = kv.at(key);
  try {
    return symexpr::parse(text);
  } catch (const symexpr::ParseError& e) {
    throw ScenarioError("key '" + key + "': " + e.what(), line);
  }
}

inline std::optional<VectorField> parse_optional_vector(
    const std::map<std::string, std::pair<std::string, int>>& kv, const std::string& stem) {
  int have = kv.count(stem + "_x") + kv.count(stem + "_y") + kv.count(stem + "_z");
  if (have == 0) return std::nullopt;
  if (have != 3)
    throw ScenarioError("vector field '" + stem + "' needs all of " + stem + "_x, " +
                        stem + "_y, " + stem + "_z");
  return VectorField{parse_field(kv, stem + "_x"), parse_field(kv, stem + "_y"),
                     parse_field(kv, stem + "_z")};
}

}  // namespace detail

inline FlowScenario load_scenario(std::istream& in) {
  static const std::vector<std::string> allowed = {
      "name", "v_x", "v_y", "v_z", "B_x", "B_y", "B_z", "phi", "h",
      "A_x", "A_y", "A_z", "psi", "p_over_rho", "F_x", "F_y", "F_z",
      "inv_1", "inv_2", "inv_3", "inv_4"};
  auto kv = detail::read_keyvals(in, allowed);
  for (const char* req : {"name", "v_x", "v_y", "v_z", "B_x", "B_y", "B_z", "phi", "h"})
    if (!kv.count(req)) throw ScenarioError(std::string("missing required key '") + req + "'");
  FlowScenario s;
  s.name = kv.at("name").first;
  s.v = {detail::parse_field(kv, "v_x"), detail::parse_field(kv, "v_y"),
         detail::parse_field(kv, "v_z")};
  s.B = {detail::parse_field(kv, "B_x"), detail::parse_field(kv, "B_y"),
         detail::parse_field(kv, "B_z")};
  s.phi = detail::parse_field(kv, "phi");
  s.h = detail::parse_field(kv, "h");
  s.A = detail::parse_optional_vector(kv, "A");
  s.F = detail::parse_optional_vector(kv, "F");
  if (kv.count("psi")) s.psi = detail::parse_field(kv, "psi");
  if (kv.count("p_over_rho")) s.p_over_rho = detail::parse_field(kv, "p_over_rho");
  for (const char* key : {"inv_1", "inv_2", "inv_3", "inv_4"})
    if (kv.count(key)) s.invariants.push_back(detail::parse_field(kv, key));
  return s;
}

inline FlowScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  return load_scenario(in);
}

inline Scenario2D load_scenario2d(std::istream& in) {
  static const std::vector<std::string> allowed = {"name", "psi", "phi2"};
  auto kv = detail::read_keyvals(in, allowed);
  for (const char* req : {"name", "psi", "phi2"})
    if (!kv.count(req)) throw ScenarioError(std::string("missing required key '") + req + "'");
  Scenario2D s;
  s.name = kv.at("name").first;
  s.psi = detail::parse_field(kv, "psi");
  s.phi2 = detail::parse_field(kv, "phi2");
  for (const Expr* e : {&s.psi, &s.phi2})
    if (symexpr::depends_on(*e, symexpr::Var::z))
      throw ScenarioError("2D scenario fields may only use t, x, y");
  return s;
}

inline Scenario2D load_scenario2d_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  return load_scenario2d(in);
}

// ---------------------------------------------------------------------------
// builtin catalog

inline std::vector<FlowScenario> builtin_catalog() {
  using namespace symexpr;
  std::vector<FlowScenario> out;

  {
    FlowScenario s;
    s.name = "SHEAR";
    s.v = {z(), zero(), zero()};
    s.B = {zero(), one(), zero()};
    s.phi = y();
    s.h = mul(y(), sub(x(), mul(t(), z())));
    s.invariants = {y(), sub(x(), mul(t(), z()))};
    s.description = "linear shear v=(z,0,0); full hierarchy truncates at level 3";
    out.push_back(std::move(s));
  }
  {
    FlowScenario s;
    s.name = "ROTATION";
    s.v = {neg(y()), x(), zero()};
    s.B = {zero(), zero(), constant(2)};
    s.phi = z();
    s.h = mul(add(pow(x(), 2), pow(y(), 2)), z());
    s.A = VectorField{neg(y()), x(), zero()};
    s.p_over_rho = div(add(pow(x(), 2), pow(y(), 2)), constant(2));
    s.invariants = {z(), add(pow(x(), 2), pow(y(), 2))};
    s.description = "rigid rotation about the z axis, with potential one-form data";
    out.push_back(std::move(s));
  }
  {
    FlowScenario s;
    s.name = "BELTRAMI-DEGENERATE";
    Expr vx = sin(z());
    Expr vy = add(sin(x()), cos(z()));
    Expr vz = cos(x());
    s.v = {vx, vy, vz};
    s.B = {vx, vy, vz};
    s.phi = add(sin(x()), cos(z()));
    s.h = add(sin(x()), cos(z()));
    s.description = "Beltrami field with B = v; the volume density vanishes identically";
    out.push_back(std::move(s));
  }
  {
    FlowScenario s;
    s.name = "NONFROZEN";
    s.v = {z(), zero(), zero()};
    s.B = {zero(), x(), zero()};
    s.phi = y();
    s.h = mul(y(), sub(x(), mul(t(), z())));
    s.description = "shear velocity with a B that is not frozen in; fails validation";
    out.push_back(std::move(s));
  }
  return out;
}

inline std::optional<FlowScenario> find_builtin(const std::string& name) {
  for (auto& s : builtin_catalog())
    if (s.name == name) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// hypothesis checks shared by validation and reporting

struct NamedCheck {
  std::string id;
  std::string identity;
  std::function<symexpr::ZeroCheck()> run;
};

inline std::vector<NamedCheck> hypothesis_checks(const FlowScenario& s,
                                                 const symexpr::IdentityConfig& cfg = {}) {
  using namespace vectorcalc;
  std::vector<NamedCheck> out;
  out.push_back({"hypothesis.div_v", "div(v) = 0",
                 [s, cfg] { return symexpr::is_zero(divergence(s.v), cfg); }});
  out.push_back({"hypothesis.div_B", "div(B) = 0",
                 [s, cfg] { return symexpr::is_zero(divergence(s.B), cfg); }});
  out.push_back({"hypothesis.frozen_field", "d_t B - curl(v x B) = 0",
                 [s, cfg] { return vectorcalc::is_zero(frozen_field_residual(s.B, s.v), cfg); }});
  out.push_back({"hypothesis.phi_advection", "d_t phi + v.grad(phi) = 0",
                 [s, cfg] { return symexpr::is_zero(material_derivative(s.phi, s.v), cfg); }});
  if (s.F || s.p_over_rho) {
    out.push_back({"hypothesis.momentum", "dv/dt + grad(p/rho) = F", [s, cfg] {
                     VectorField accel = {material_derivative(s.v.x, s.v),
                                          material_derivative(s.v.y, s.v),
                                          material_derivative(s.v.z, s.v)};
                     if (s.p_over_rho) accel = vadd(accel, grad(*s.p_over_rho));
                     if (s.F) accel = vsub(accel, *s.F);
                     return vectorcalc::is_zero(accel, cfg);
                   }});
  }
  return out;
}

inline void validate_scenario(const FlowScenario& s, const symexpr::IdentityConfig& cfg = {}) {
  for (const NamedCheck& nc : hypothesis_checks(s, cfg)) {
    symexpr::ZeroCheck c = nc.run();
    if (!c.zero) throw symexpr::InvariantViolationError(nc.identity, c);
  }
}

}  // namespace kinsym::flow
