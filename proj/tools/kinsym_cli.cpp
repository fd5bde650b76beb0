// Command-line front end: loads a flow scenario (builtin or file), runs the
// verification report, and renders it as text or JSON. Exit codes: 0 all
// checks pass, 1 an identity failed or could not be decided, 2 degenerate
// input, 3 parse or usage error.

#include "kinsym/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

using namespace kinsym;

struct CommonOptions {
  std::string scenario;
  int depth = 4;
  std::uint64_t seed = symexpr::kDefaultSeed;
  int samples = 20;
  double tol = -1.0;
  bool no_validate = false;
  std::string format = "text";
};

symexpr::IdentityConfig make_config(const CommonOptions& o) {
  symexpr::IdentityConfig cfg;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  if (o.tol >= 0.0) {
    cfg.abs_tol = o.tol;
    cfg.rel_tol = o.tol;
  }
  return cfg;
}

flow::FlowScenario resolve_scenario(const std::string& ref) {
  if (std::filesystem::exists(ref)) return flow::load_scenario_file(ref);
  if (auto b = flow::find_builtin(ref)) return *b;
  throw flow::ScenarioError("no scenario file or builtin scenario named '" + ref + "'");
}

void add_common(CLI::App* sub, CommonOptions& o, bool with_format) {
  sub->add_option("scenario", o.scenario, "scenario file or builtin name")->required();
  sub->add_option("--depth", o.depth, "hierarchy depth K")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", o.seed, "sample-point seed");
  sub->add_option("--samples", o.samples, "sample points per identity")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "absolute and relative tolerance");
  sub->add_flag("--no-validate", o.no_validate, "skip hypothesis validation at load");
  if (with_format)
    sub->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
}

int emit(const report::Report& rep, const std::string& format) {
  if (format == "json")
    std::cout << report::to_json(rep).dump(2) << "\n";
  else
    std::cout << report::render_text(rep);
  return report::exit_code(rep);
}

int run_check(const CommonOptions& o) {
  flow::FlowScenario s = resolve_scenario(o.scenario);
  symexpr::IdentityConfig cfg = make_config(o);
  if (!o.no_validate) flow::validate_scenario(s, cfg);
  report::Report rep = report::run_report(s, o.depth, cfg, !o.no_validate);
  return emit(rep, o.format);
}

int run_hierarchy(const CommonOptions& o) {
  flow::FlowScenario s = resolve_scenario(o.scenario);
  symexpr::IdentityConfig cfg = make_config(o);
  if (!o.no_validate) flow::validate_scenario(s, cfg);
  auto levels = hierarchy::generate(s, o.depth, cfg, hierarchy::GenerateMode::Strict);
  std::printf("scenario %s: hierarchy to depth %d\n", s.name.c_str(), o.depth);
  for (const auto& lv : levels) {
    if (lv.truncated) {
      std::printf("level %d: h = 0 (the ladder truncates here)\n", lv.k);
      break;
    }
    std::printf("level %d:\n  h  = %s\n  W  = (%s, %s, %s)\n  xi = %s\n", lv.k,
                symexpr::render(lv.h).c_str(), symexpr::render(lv.W.x).c_str(),
                symexpr::render(lv.W.y).c_str(), symexpr::render(lv.W.z).c_str(),
                symexpr::render(lv.xi).c_str());
  }
  return 0;
}

int run_brackets(const CommonOptions& o) {
  flow::FlowScenario s = resolve_scenario(o.scenario);
  symexpr::IdentityConfig cfg = make_config(o);
  if (!o.no_validate) flow::validate_scenario(s, cfg);
  auto levels = hierarchy::generate(s, o.depth, cfg, hierarchy::GenerateMode::Collect);
  int top = 0;
  for (const auto& lv : levels)
    if (!lv.truncated) top = lv.k;
  bool ok = true;
  std::printf("scenario %s: ladder commutators to depth %d\n", s.name.c_str(), o.depth);
  for (int l = 1; l <= top; ++l)
    for (int k = 1; k <= top; ++k) {
      auto r = hierarchy::bracket_level(levels, k, l, s, cfg);
      ok = ok && r.consistency.zero;
      std::printf("h_{%d%d} = %s ; [W_%d, W_%d] = W(h_{%d%d}): %s\n", l, k,
                  symexpr::render(r.h_lk).c_str(), k, l, l, k,
                  r.consistency.zero ? "ok" : "VIOLATED");
      if (!r.consistency.zero)
        std::printf("  witness %s\n", symexpr::describe_witness(r.consistency).c_str());
    }
  auto inv = poisson::involutivity_report(levels, s, cfg);
  for (const auto& row : inv.rows)
    std::printf("%s: %s\n", row.id.c_str(), row.check.zero ? "ok" : "VIOLATED");
  ok = ok && inv.all_zero;
  return ok ? 0 : 1;
}

int run_check2d(const std::string& file, const CommonOptions& o) {
  flow::Scenario2D s2 = flow::load_scenario2d_file(file);
  report::Report rep = report::check_2d(s2, make_config(o));
  return emit(rep, o.format);
}

int run_catalog() {
  for (const auto& s : flow::builtin_catalog())
    std::printf("%-20s %s\n", s.name.c_str(), s.description.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry and bracket checks for suspended incompressible flows"};
  app.require_subcommand(1);

  CommonOptions check_opt;
  CLI::App* check = app.add_subcommand("check", "run the full verification report");
  add_common(check, check_opt, true);

  CommonOptions hier_opt;
  CLI::App* hier = app.add_subcommand("hierarchy", "print the symmetry ladder symbolically");
  add_common(hier, hier_opt, false);

  CommonOptions br_opt;
  CLI::App* br = app.add_subcommand("brackets", "print ladder commutators and involutivity");
  add_common(br, br_opt, false);

  CommonOptions c2_opt;
  std::string file2d;
  CLI::App* c2 = app.add_subcommand("check2d", "check a planar stream-function scenario");
  c2->add_option("file", file2d, "2D scenario file")->required();
  c2->add_option("--seed", c2_opt.seed, "sample-point seed");
  c2->add_option("--samples", c2_opt.samples, "sample points per identity")
      ->check(CLI::PositiveNumber);
  c2->add_option("--tol", c2_opt.tol, "absolute and relative tolerance");
  c2->add_option("--format", c2_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* cat = app.add_subcommand("catalog", "list builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*check) return run_check(check_opt);
    if (*hier) return run_hierarchy(hier_opt);
    if (*br) return run_brackets(br_opt);
    if (*c2) return run_check2d(file2d, c2_opt);
    if (*cat) return run_catalog();
  } catch (const symexpr::DegenerateError& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return 2;
  } catch (const symexpr::InvariantViolationError& e) {
    std::fprintf(stderr, "violation: %s\n", e.what());
    return 1;
  } catch (const symexpr::IndeterminateError& e) {
    std::fprintf(stderr, "indeterminate: %s\n", e.what());
    return 1;
  } catch (const flow::ScenarioError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return 3;
  } catch (const symexpr::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 3;
}
