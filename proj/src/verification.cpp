#include "covergame/verification.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "covergame/equilibrium.hpp"
#include "covergame/errors.hpp"
#include "covergame/instances.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"
#include "covergame/scan.hpp"
#include "covergame/state_based.hpp"

namespace covergame {

namespace {

using Clock = std::chrono::steady_clock;

struct Sweep {
  std::vector<Game> games;
};

Sweep make_sweep(uint64_t seed, int size) {
  Sweep sweep;
  sweep.games.reserve(size);
  for (int g = 0; g < size; ++g) {
    SplitMix64 rng(seed * 0x100000001B3ull + g);
    const int k = 1 + static_cast<int>(rng.below(4));
    const int resources = 1 + static_cast<int>(rng.below(6));
    int n = 1 + static_cast<int>(rng.below(5));
    n = std::min<int>(n, k * resources);  // keep capacity satisfiable
    const ValueLaw law = rng.below(2) == 0 ? ValueLaw::kUniform01 : ValueLaw::kInteger1to10;
    sweep.games.push_back(random_instance(rng.next(), n, resources, k, law));
  }
  return sweep;
}

std::vector<DistributionRule> sweep_rules(int k) {
  return {marginal_contribution_rule(k), gairing_rule(k), equal_share_rule(k),
          frontier_rule(Rational(11, 20), k)};
}

Allocation random_profile(const ProfileSpace& space, SplitMix64& rng) {
  return space.allocation_at(rng.below(space.count()));
}

class Runner {
 public:
  explicit Runner(const VerifyOptions& options) : options_(options) {}

  void run(const std::string& id, const std::string& description, const std::string& expected,
           const std::string& tolerance,
           const std::function<std::pair<bool, std::string>()>& body) {
    if (options_.progress) *options_.progress << "[verify] " << id << " ..." << std::flush;
    CheckResult result;
    result.id = id;
    result.description = description;
    result.expected = expected;
    result.tolerance = tolerance;
    const auto start = Clock::now();
    try {
      auto [pass, measured] = body();
      result.pass = pass;
      result.measured = std::move(measured);
    } catch (const std::exception& e) {
      result.pass = false;
      result.measured = std::string("exception: ") + e.what();
    }
    result.millis =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (options_.progress)
      *options_.progress << (result.pass ? " pass (" : " FAIL (") << result.millis << " ms)"
                         << std::endl;
    results_.push_back(std::move(result));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const VerifyOptions& options_;
  std::vector<CheckResult> results_;
};

std::string ratio_string(const Rational& value) {
  std::ostringstream out;
  out << to_fraction_string(value) << " (" << to_double(value) << ")";
  return out.str();
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  if (options.k_max < 2) throw std::domain_error("verification needs k_max >= 2");
  const Rational slack(1, 1000000000);
  Runner runner(options);

  // 1. printed Gairing shares at k=10, three decimals
  if (options.k_max >= 10) {
    runner.run("gairing-table", "gairing_rule(10) matches the published ten shares to 3 dp",
               "1.000 0.418 0.254 0.180 0.139 0.113 0.095 0.082 0.072 0.065", "5e-4", [&] {
                 const double table[10] = {1.0,   0.418, 0.254, 0.180, 0.139,
                                           0.113, 0.095, 0.082, 0.072, 0.065};
                 const DistributionRule rule = gairing_rule(10);
                 bool pass = true;
                 std::ostringstream measured;
                 for (int j = 1; j <= 10; ++j) {
                   const double v = to_double(rule(j));
                   measured << (j > 1 ? " " : "") << v;
                   if (std::abs(v - table[j - 1]) >= 5e-4) pass = false;
                 }
                 return std::pair{pass, measured.str()};
               });
  }

  // 2. optimal anarchy: gap route == closed form, limit toward 1 - 1/e
  runner.run("optimal-poa-consistency",
             "poa_bound(gairing_rule(k)) equals the closed form for k=2..k_max and "
             "approaches 1-1/e",
             "exact equality; |optimal_poa(12) - (1-1/e)| < 2e-3", "2e-3", [&] {
               bool pass = true;
               for (int k = 2; k <= options.k_max; ++k) {
                 // optimal_poa itself cross-checks the closed form and throws
                 // on disagreement
                 if (optimal_poa(k) != poa_bound(gairing_rule(k))) pass = false;
               }
               const int k_limit = std::min(options.k_max, 12);
               const double gap = std::abs(to_double(optimal_poa(k_limit)) - (1.0 - std::exp(-1.0)));
               if (options.k_max >= 12 && gap >= 2e-3) pass = false;
               std::ostringstream measured;
               measured << "all equal; |optimal_poa(" << k_limit << ") - (1-1/e)| = " << gap;
               return std::pair{pass, measured.str()};
             });

  // 3. anarchy tightness: geometric levels approach the bound, the flat
  // construction meets it exactly
  runner.run("poa-tightness",
             "level(f_gar^2, j=1, m=" + std::to_string(options.level_m) +
                 ") ratio within 1e-8 of 2/3; simple(f_gar^k, j=k) ratio equals poa_bound "
                 "exactly for k=2..4",
             "2/3 and exact equality", "1e-8 / exact", [&] {
               bool pass = true;
               std::ostringstream measured;
               const GeneratedInstance level =
                   level_instance(gairing_rule(2), 1, options.level_m);
               const uint64_t need = ProfileSpace(level.game).count();
               const EfficiencyReport report =
                   efficiency(level.game, gairing_rule(2), need, Rational(0), options.jobs, 0);
               const Rational err = abs(report.poa - Rational(2, 3));
               if (options.level_m >= 30 && err >= Rational(1, 100000000)) pass = false;
               if (err >= Rational(2, BigInt(3) << options.level_m)) pass = false;
               measured << "level ratio " << ratio_string(report.poa) << ", |err| "
                        << to_double(err);
               for (int k = 2; k <= 4; ++k) {
                 const DistributionRule rule = gairing_rule(k);
                 const GeneratedInstance simple = simple_tight_instance(rule, k);
                 const EfficiencyReport r =
                     efficiency(simple.game, rule, kDefaultProfileCap, Rational(0), options.jobs);
                 if (r.poa != poa_bound(rule)) pass = false;
                 measured << "; simple k=" << k << " ratio " << to_fraction_string(r.poa);
               }
               return std::pair{pass, measured.str()};
             });

  // 4. stability tightness at the binding index
  runner.run("pos-tightness",
             "pos_family(f_gar^k, j*, eps=1e-4) stability within 2e-4 of pos_bound, k=2..4",
             "pos_bound(f_gar^k)", "2e-4", [&] {
               bool pass = true;
               std::ostringstream measured;
               for (int k = 2; k <= 4; ++k) {
                 const DistributionRule rule = gairing_rule(k);
                 int binding = 1;
                 Rational best = 0;
                 for (int j = 1; j <= k; ++j)
                   if ((j - 1) * rule(j) > best) {
                     best = (j - 1) * rule(j);
                     binding = j;
                   }
                 const GeneratedInstance inst =
                     pos_family_instance(rule, binding, Rational(1, 10000));
                 const EfficiencyReport r =
                     efficiency(inst.game, rule, kDefaultProfileCap, Rational(0), options.jobs);
                 const Rational err = abs(r.pos - pos_bound(rule));
                 if (err >= Rational(2, 10000)) pass = false;
                 measured << (k > 2 ? "; " : "") << "k=" << k << " pos "
                          << to_double(r.pos) << " vs bound " << to_double(pos_bound(rule));
               }
               return std::pair{pass, measured.str()};
             });

  const Sweep sweep = make_sweep(options.seed, options.sweep_size);

  // 5. lower bounds on random games, four rules per game
  runner.run("lower-bound-sweep",
             "on every sweep game and rule: realized poa >= bound - 1e-9, realized pos >= "
             "bound - 1e-9; marginal contribution reaches pos = 1 exactly",
             "zero violations", "1e-9", [&] {
               uint64_t violations = 0, analyses = 0;
               for (const Game& game : sweep.games) {
                 const auto rules = sweep_rules(game.k());
                 for (size_t ri = 0; ri < rules.size(); ++ri) {
                   const DistributionRule& rule = rules[ri];
                   const EfficiencyReport r =
                       efficiency(game, rule, kDefaultProfileCap, Rational(0), options.jobs, 0);
                   ++analyses;
                   if (r.poa < poa_bound(rule) - slack) ++violations;
                   if (r.pos < pos_bound(rule) - slack) ++violations;
                   const bool is_mc = ri == 0;
                   if (is_mc && r.pos != 1) ++violations;
                 }
               }
               std::ostringstream measured;
               measured << violations << " violations over " << analyses << " analyses";
               return std::pair{violations == 0, measured.str()};
             });

  // 6. the frontier is unbreachable on the k=3 grid
  runner.run("frontier-grid",
             "grid rules (f(1)=1, 1/50 steps, k=3): none beats poa_bound(f_gar^3); none with "
             "poa >= alpha beats Z(alpha,3) + 1/50; Z(alpha*,3) = alpha* exactly",
             "no breach", "1/50", [&] {
               const int grid = 50;
               const Rational alpha_star = optimal_poa(3);
               const Rational alphas[4] = {Rational(13, 25), Rational(11, 20), Rational(3, 5),
                                           alpha_star};
               const Rational poa_star = poa_bound(gairing_rule(3));
               bool pass = frontier_value(alpha_star, 3) == alpha_star;
               uint64_t rules_checked = 0;
               Rational best_poa = 0;
               for (int a = 0; a <= grid; ++a) {
                 for (int b = 0; b <= a; ++b) {
                   const DistributionRule rule(
                       {Rational(1), Rational(a, grid), Rational(b, grid)});
                   ++rules_checked;
                   const Rational poa = poa_bound(rule);
                   const Rational pos = pos_bound(rule);
                   if (poa > best_poa) best_poa = poa;
                   if (poa > poa_star) pass = false;
                   for (const Rational& alpha : alphas)
                     if (poa >= alpha && pos > frontier_value(alpha, 3) + Rational(1, grid))
                       pass = false;
                 }
               }
               std::ostringstream measured;
               measured << rules_checked << " rules; best grid poa " << ratio_string(best_poa)
                        << " vs " << ratio_string(poa_star);
               return std::pair{pass, measured.str()};
             });

  // 7. state-based mechanism: stability 1, anarchy at the optimum, toggle
  // consistency across an agent's alternatives
  runner.run("state-based-guarantees",
             "sweep: optimum is a state-based equilibrium (pos = 1); every equilibrium "
             "ratio >= optimal_poa(k) - 1e-9; toggles agree across 1e4 (game, profile, "
             "agent) triples",
             "zero violations", "1e-9", [&] {
               uint64_t violations = 0;
               for (const Game& game : sweep.games) {
                 const EfficiencyReport r =
                     sb_equilibrium_analysis(game, game.k(), kDefaultProfileCap, Rational(0), 0);
                 if (r.pos != 1) ++violations;
                 if (!sb_is_equilibrium(game, game.k(), r.opt_allocation)) ++violations;
                 if (r.poa < optimal_poa(game.k()) - slack) ++violations;
               }
               SplitMix64 rng(options.seed ^ 0x5BF03635ull);
               uint64_t toggle_mismatches = 0;
               for (int t = 0; t < 10000; ++t) {
                 const Game& game = sweep.games[t % sweep.games.size()];
                 const ProfileSpace space(game);
                 Allocation a = random_profile(space, rng);
                 const int agent = static_cast<int>(rng.below(game.num_agents()));
                 bool first = true;
                 RuleToggle expected_toggle = RuleToggle::kMarginalContribution;
                 for (int32_t alt : game.agent(agent).actions) {
                   Allocation b = a;
                   b.choice[agent] = alt;
                   const RuleToggle toggle = toggle_of(game, b, agent);
                   if (first) {
                     expected_toggle = toggle;
                     first = false;
                   } else if (toggle != expected_toggle) {
                     ++toggle_mismatches;
                     break;
                   }
                 }
               }
               std::ostringstream measured;
               measured << violations << " guarantee violations, " << toggle_mismatches
                        << " toggle mismatches";
               return std::pair{violations == 0 && toggle_mismatches == 0, measured.str()};
             });

  // 8. reduction and allocation repair on the first 100 sweep games
  runner.run("reduction-repair",
             "G' keeps a_ne as a Gairing equilibrium, its optimum dominates the original, "
             "repair reproduces the optimal welfare, every removed action is covered by "
             "another agent at equilibrium",
             "all steps hold on every game", "exact", [&] {
               uint64_t violations = 0;
               const size_t count = std::min<size_t>(100, sweep.games.size());
               for (size_t g = 0; g < count; ++g) {
                 const Game& game = sweep.games[g];
                 const EfficiencyReport r =
                     sb_equilibrium_analysis(game, game.k(), kDefaultProfileCap, Rational(0), 0);
                 const Allocation a_ne = r.worst_equilibrium;
                 const ReducedGame reduced = reduction_game(game, game.k(), a_ne);

                 if (!is_equilibrium(reduced.game, reduced.rule, a_ne, Rational(0))) ++violations;

                 const auto [opt_g, w_opt_g] = brute_force_optimum(game, kDefaultProfileCap);
                 const auto [opt_r, w_opt_r] = brute_force_optimum(reduced.game, kDefaultProfileCap);
                 if (w_opt_r < w_opt_g) ++violations;

                 const Allocation repaired = repair_allocation(reduced, opt_g);
                 if (welfare(reduced.game, repaired) != w_opt_g) ++violations;

                 // the H_i lemma: a removed resource is someone else's
                 // equilibrium choice (this is what makes repair possible)
                 for (int i = 0; i < game.num_agents(); ++i) {
                   for (int32_t removed : game.agent(i).actions) {
                     if (reduced.game.agent_has_action(i, removed)) continue;
                     bool held = false;
                     for (int j = 0; j < game.num_agents(); ++j)
                       if (j != i && a_ne.choice[j] == removed) held = true;
                     if (!held) ++violations;
                   }
                 }

                 // step chain: ratio in G dominates ratio in G'
                 if (w_opt_g != 0 && w_opt_r != 0 &&
                     welfare(game, a_ne) / w_opt_g < welfare(reduced.game, a_ne) / w_opt_r)
                   ++violations;
               }
               std::ostringstream measured;
               measured << violations << " violations over " << count << " games";
               return std::pair{violations == 0, measured.str()};
             });

  // 9. potential identities and best-response dynamics
  runner.run("potential-properties",
             "phi(a') - phi(a) equals the deviating agent's utility change exactly on 1e4 "
             "deviations; best-response dynamics terminates with strictly increasing phi on "
             "every sweep game",
             "exact identity; termination", "exact", [&] {
               uint64_t violations = 0;
               SplitMix64 rng(options.seed ^ 0xA076'1D64'78BD'642Full);
               for (int t = 0; t < 10000; ++t) {
                 const Game& game = sweep.games[t % sweep.games.size()];
                 const auto rules = sweep_rules(game.k());
                 const DistributionRule& rule = rules[t % rules.size()];
                 const ProfileSpace space(game);
                 Allocation a = random_profile(space, rng);
                 const int agent = static_cast<int>(rng.below(game.num_agents()));
                 const auto& acts = game.agent(agent).actions;
                 const int32_t alt = acts[rng.below(acts.size())];
                 if (alt == a.choice[agent]) continue;
                 Allocation b = a;
                 b.choice[agent] = alt;
                 const Rational lhs = potential(game, rule, b) - potential(game, rule, a);
                 const Rational rhs =
                     utility(game, rule, agent, b) - utility(game, rule, agent, a);
                 if (lhs != rhs) ++violations;
               }
               uint64_t brd_failures = 0;
               for (const Game& game : sweep.games) {
                 SplitMix64 grng(options.seed ^ (game.num_agents() * 0x9E3779B9ull));
                 const ProfileSpace space(game);
                 const DistributionRule rule = gairing_rule(game.k());
                 const Allocation start = random_profile(space, grng);
                 const BrdResult brd = best_response_dynamics(game, rule, start, space.count());
                 if (brd.trace.size() > space.count()) ++brd_failures;
                 Rational phi = potential(game, rule, start);
                 for (const BrdStep& step : brd.trace) {
                   if (step.potential_after <= phi) ++brd_failures;
                   phi = step.potential_after;
                 }
                 if (!is_equilibrium(game, rule, brd.allocation, Rational(0))) ++brd_failures;
               }
               std::ostringstream measured;
               measured << violations << " identity violations, " << brd_failures
                        << " dynamics failures";
               return std::pair{violations == 0 && brd_failures == 0, measured.str()};
             });

  return runner.take();
}

}  // namespace covergame
