#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "covergame/equilibrium.hpp"
#include "covergame/errors.hpp"
#include "covergame/instances.hpp"
#include "covergame/io.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"
#include "covergame/state_based.hpp"
#include "covergame/verification.hpp"

namespace {

using namespace covergame;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBound = 2;
constexpr int kExitCap = 3;

struct RuleChoice {
  bool state_based = false;
  std::optional<DistributionRule> rule;
};

RuleChoice parse_rule_selector(const std::string& selector, int k) {
  if (selector == "state-based") return {true, std::nullopt};
  if (selector == "gairing") return {false, gairing_rule(k)};
  if (selector == "mc") return {false, marginal_contribution_rule(k)};
  if (selector == "equal-share") return {false, equal_share_rule(k)};
  if (selector.rfind("frontier:", 0) == 0)
    return {false, frontier_rule(parse_rational(selector.substr(9)), k)};
  if (selector.rfind("file:", 0) == 0) return {false, load_rule(selector.substr(5))};
  throw ParseError("unknown rule selector '" + selector +
                   "' (gairing|mc|equal-share|frontier:<alpha>|file:<path>|state-based)");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << text;
  if (!out) throw ParseError("write failed for " + out_path);
}

int run_analyze(const std::string& game_path, const std::string& selector, uint64_t cap,
                const std::string& tol_text, int jobs, const std::string& stats_path,
                const std::string& out_path) {
  const Game game = load_game(game_path);
  const Rational tol = parse_rational(tol_text);
  const RuleChoice choice = parse_rule_selector(selector, game.k());

  if (!stats_path.empty()) {
    const Allocation a = load_allocation(game, stats_path);
    emit(state_stats_to_json(game, state_stats(game, a)).dump(2) + "\n", out_path);
    return kExitOk;
  }

  EfficiencyReport report;
  if (choice.state_based) {
    report = sb_equilibrium_analysis(game, game.k(), cap, tol);
  } else {
    for (const std::string& warning : rule_warnings(*choice.rule))
      std::cerr << "warning: " << warning << "\n";
    report = efficiency(game, *choice.rule, cap, tol, jobs);
  }
  Json out = report_to_json(game, report);
  out["rule"] = selector;
  emit(out.dump(2) + "\n", out_path);

  const bool violated =
      report.poa < report.bound_poa - tol || report.pos < report.bound_pos - tol;
  return violated ? kExitBound : kExitOk;
}

int run_generate(const std::string& family, const std::string& selector, int k, int j, int m,
                 const std::string& eps_text, uint64_t seed, int n, int resources,
                 const std::string& values, const std::string& out_path) {
  if (out_path.empty()) throw ParseError("generate needs --out");

  GeneratedInstance generated = [&] {
    if (family == "random") {
      const ValueLaw law = values == "uniform"  ? ValueLaw::kUniform01
                           : values == "integer" ? ValueLaw::kInteger1to10
                                                 : throw ParseError("--values uniform|integer");
      GeneratedInstance out{random_instance(seed, n, resources, k, law),
                            InstanceProvenance{"random",
                                               {{"seed", std::to_string(seed)},
                                                {"n", std::to_string(n)},
                                                {"resources", std::to_string(resources)},
                                                {"k", std::to_string(k)},
                                                {"values", values}},
                                               std::nullopt,
                                               std::nullopt,
                                               std::nullopt}};
      return out;
    }
    const RuleChoice choice = parse_rule_selector(selector, k);
    if (choice.state_based) throw ParseError("generators need a concrete rule");
    if (family == "level") return level_instance(*choice.rule, j, m);
    if (family == "simple") return simple_tight_instance(*choice.rule, j);
    if (family == "pos-family")
      return pos_family_instance(*choice.rule, j, parse_rational(eps_text));
    throw ParseError("unknown family '" + family + "' (level|simple|pos-family|random)");
  }();

  save_game(generated.game, out_path);
  std::ofstream side(out_path + ".prov.json");
  if (!side) throw ParseError("cannot write " + out_path + ".prov.json");
  side << provenance_to_json(generated.game, generated.provenance).dump(2) << "\n";
  return kExitOk;
}

int run_frontier(int k, int samples, const std::string& out_path) {
  emit(frontier_csv(k, samples), out_path);
  return kExitOk;
}

int run_verify(int k_max, int sweep, uint64_t seed, int jobs, int level_m) {
  VerifyOptions options;
  options.k_max = k_max;
  options.sweep_size = sweep;
  options.seed = seed;
  options.jobs = jobs;
  options.level_m = level_m;
  options.progress = &std::cerr;
  const std::vector<CheckResult> results = run_verification(options);

  // timings go to stderr so repeated runs print byte-identical reports
  bool all_pass = true;
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(26) << r.id
              << " measured: " << r.measured << " | expected: " << r.expected
              << " | tolerance: " << r.tolerance << "\n";
  }
  std::cout << (all_pass ? "all checks passed" : "CHECKS FAILED") << "\n";
  return all_pass ? kExitOk : kExitBound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covering-game utility design: anarchy/stability analysis and instances"};
  app.require_subcommand(1);

  std::string game_path, selector = "gairing", out_path, stats_path;
  std::string tol_text = "1e-9", eps_text = "1/100", values = "uniform", family;
  uint64_t cap = kDefaultProfileCap, seed = 1;
  int jobs = 0, k = 2, j = 1, m = 1, samples = 50, n = 3, resources = 4;
  int k_max = 12, sweep = 500;

  CLI::App* analyze = app.add_subcommand("analyze", "equilibria and efficiency of a game file");
  analyze->add_option("game", game_path, "game file (JSON)")->required();
  analyze->add_option("--rule", selector,
                      "gairing|mc|equal-share|frontier:<alpha>|file:<path>|state-based");
  analyze->add_option("--cap", cap, "profile-count cap");
  analyze->add_option("--tol", tol_text, "equilibrium tolerance (exact rational)");
  analyze->add_option("--jobs", jobs, "worker threads (0 = all)");
  analyze->add_option("--stats", stats_path,
                      "allocation file: print its per-agent state statistics instead");
  analyze->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* frontier = app.add_subcommand("frontier", "anarchy/stability trade-off sweep (CSV)");
  frontier->add_option("--k", k, "cardinality bound")->required();
  frontier->add_option("--samples", samples, "number of alpha samples");
  frontier->add_option("--out", out_path, "write the CSV here instead of stdout");

  CLI::App* generate = app.add_subcommand("generate", "construct worst-case or random instances");
  generate->add_option("family", family, "level|simple|pos-family|random")->required();
  generate->add_option("--rule", selector, "rule the construction targets");
  generate->add_option("--k", k, "rule cardinality");
  generate->add_option("--j", j, "construction index j");
  generate->add_option("--m", m, "levels (level family)");
  generate->add_option("--eps", eps_text, "epsilon (pos-family)");
  generate->add_option("--seed", seed, "random family seed");
  generate->add_option("--n", n, "random family agents");
  generate->add_option("--resources", resources, "random family resources");
  generate->add_option("--values", values, "random family value law: uniform|integer");
  generate->add_option("--out", out_path, "output game file (sidecar: <out>.prov.json)");

  int level_m = 30;
  CLI::App* verify = app.add_subcommand("verify", "run the full guarantee suite");
  verify->add_option("--k-max", k_max, "largest cardinality for the closed-form checks");
  verify->add_option("--sweep", sweep, "number of random sweep games");
  verify->add_option("--seed", seed, "sweep seed");
  verify->add_option("--jobs", jobs, "worker threads (0 = all)");
  verify->add_option("--level-m", level_m, "depth of the geometric tightness instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(game_path, selector, cap, tol_text, jobs, stats_path, out_path);
    if (app.got_subcommand(frontier)) return run_frontier(k, samples, out_path);
    if (app.got_subcommand(generate))
      return run_generate(family, selector, k, j, m, eps_text, seed, n, resources, values,
                          out_path);
    if (app.got_subcommand(verify)) return run_verify(k_max, sweep, seed, jobs, level_m);
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const InternalInconsistencyError& e) {
    std::cerr << "guarantee violation: " << e.what() << "\n";
    return kExitBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
