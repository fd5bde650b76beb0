#pragma once

// Probabilistic verification that a symbolic expression vanishes identically:
// evaluate at seeded random points in a box and compare against a tolerance
// that scales with the size of the expression's additive terms. A smooth
// expression that is not identically zero vanishes on a measure-zero set, so
// surviving every sample point is treated as a verified identity; a failing
// point is returned as a witness.
//
// Sampling is fully deterministic for a given seed: points come from a
// mt19937_64 stream mapped to doubles without platform-dependent
// distributions, and resampling after an evaluation error (division by a
// small denominator, overflow) consumes the stream in a fixed order.

#include "kinsym/expr.hpp"

#include <cstdint>
#include <random>

namespace kinsym::symexpr {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct IdentityConfig {
  int samples = 20;
  double box_lo = -2.0;
  double box_hi = 2.0;
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
  double min_denominator = 1e-3;
};

struct ZeroCheck {
  bool zero = false;
  std::optional<SamplePoint> witness;  // set when zero == false
  double value = 0.0;                  // witness value of the expression
  double scale = 0.0;                  // witness additive-term scale
  int points_used = 0;
  int points_failed = 0;
};

class IndeterminateError : public std::runtime_error {
 public:
  IndeterminateError(int failed, int budget, std::string detail)
      : std::runtime_error("identity check indeterminate: " + std::to_string(failed) +
                           " of " + std::to_string(budget) +
                           " sample points failed to evaluate (" + detail + ")"),
        failed_(failed),
        budget_(budget) {}
  int failed() const { return failed_; }
  int budget() const { return budget_; }

 private:
  int failed_;
  int budget_;
};

// A structure whose non-degeneracy hypothesis failed (identically vanishing
// volume density or Pfaffian); the CLI maps this to its own exit code.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// witness location and value of a failed zero check, empty when it passed
inline std::string describe_witness(const ZeroCheck& c) {
  if (!c.witness) return "";
  const SamplePoint& p = *c.witness;
  return "(t,x,y,z)=(" + std::to_string(p.t) + "," + std::to_string(p.x) + "," +
         std::to_string(p.y) + "," + std::to_string(p.z) +
         "), value=" + std::to_string(c.value);
}

// A relation the construction promises failed its verification.
class InvariantViolationError : public std::runtime_error {
 public:
  InvariantViolationError(const std::string& relation, const ZeroCheck& check)
      : std::runtime_error(relation + " violated" +
                           (check.witness ? " at " + describe_witness(check) : "")),
        check_(check) {}
  const ZeroCheck& check() const { return check_; }

 private:
  ZeroCheck check_;
};

class PointSampler {
 public:
  explicit PointSampler(const IdentityConfig& cfg)
      : rng_(cfg.seed), lo_(cfg.box_lo), hi_(cfg.box_hi) {}

  SamplePoint next() {
    SamplePoint p;
    p.t = draw();
    p.x = draw();
    p.y = draw();
    p.z = draw();
    return p;
  }

 private:
  double draw() {
    // top 53 bits -> [0,1); identical on every platform
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo_ + (hi_ - lo_) * u;
  }
  std::mt19937_64 rng_;
  double lo_, hi_;
};

inline ZeroCheck is_zero(const Expr& e, const IdentityConfig& cfg = {}) {
  // cheap structural shortcut; also keeps truncated hierarchy levels exact
  if (is_structural_zero(e)) return {true, {}, 0.0, 0.0, 0, 0};
  PointSampler sampler(cfg);
  EvalOptions opt{cfg.min_denominator};
  int ok = 0, failed = 0;
  std::string last_error = "no error";
  while (ok < cfg.samples) {
    if (failed > cfg.samples / 2)
      throw IndeterminateError(failed, cfg.samples, last_error);
    SamplePoint p = sampler.next();
    ValueWithScale vs{};
    try {
      vs = eval_with_scale(e, p, opt);
    } catch (const EvalError& err) {
      ++failed;
      last_error = err.what();
      continue;
    }
    ++ok;
    if (std::abs(vs.value) > cfg.abs_tol + cfg.rel_tol * vs.scale)
      return {false, p, vs.value, vs.scale, ok, failed};
  }
  return {true, {}, 0.0, 0.0, ok, failed};
}

}  // namespace kinsym::symexpr
