#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covergame/equilibrium.hpp"
#include "covergame/instances.hpp"
#include "covergame/scan.hpp"
#include "covergame/state_based.hpp"
#include "test_games.hpp"

using namespace covergame;
using namespace covergame::testing;

namespace {

// five agents wired so the reach table is 1->{2,3,4}, 2->{3,4}, 3->{2,4},
// 4->{2,3}, 5->{} at the recorded allocation
Game make_reach_fixture() {
  return Game({{"w", Rational(1)},
               {"x", Rational(1)},
               {"y", Rational(1)},
               {"z", Rational(1)},
               {"v", Rational(1)}},
              {{"a1", {0, 1}, false},
               {"a2", {3, 1}, false},
               {"a3", {1, 2}, false},
               {"a4", {2, 3}, false},
               {"a5", {4}, false}},
              5);
}

}  // namespace

TEST_CASE("information flow graph") {
  const Game e1 = make_e1();
  CHECK(info_graph(e1, alloc({0, 0})).edges ==
        std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
  CHECK(info_graph(e1, alloc({1, 2})).edges.empty());

  Game nullable({{"r0", Rational(1)}}, {{"a1", {0}, true}, {"a2", {0}, false}}, 2);
  const InfoGraph g = info_graph(nullable, alloc({kNullChoice, 0}));
  CHECK(g.edges == std::vector<std::pair<int, int>>{{1, 0}});
}

TEST_CASE("reach sets reproduce the worked example") {
  const Game fixture = make_reach_fixture();
  const Allocation a = alloc({0, 1, 2, 3, 4});
  const InfoGraph graph = info_graph(fixture, a);
  CHECK(reach_set(graph, 0) == std::vector<int>{1, 2, 3});
  CHECK(reach_set(graph, 1) == std::vector<int>{2, 3});
  CHECK(reach_set(graph, 2) == std::vector<int>{1, 3});
  CHECK(reach_set(graph, 3) == std::vector<int>{1, 2});
  CHECK(reach_set(graph, 4).empty());

  InfoGraph empty;
  empty.num_agents = 3;
  for (int i = 0; i < 3; ++i) CHECK(reach_set(empty, i).empty());
}

TEST_CASE("enlarged choice sets") {
  const Game fixture = make_reach_fixture();
  const Allocation a = alloc({0, 1, 2, 3, 4});
  CHECK(enlarged_set(fixture, a, 0) == std::vector<int32_t>{0, 1, 2, 3});
  CHECK(enlarged_set(fixture, a, 1) == std::vector<int32_t>{1, 2, 3});
  CHECK(enlarged_set(fixture, a, 4) == std::vector<int32_t>{4});
}

TEST_CASE("own-best and reachable-best uncovered values") {
  const Game e1 = make_e1();
  CHECK(best_own_uncovered(e1, alloc({0, 0}), 0) == Rational(3, 5));
  CHECK(best_reachable_uncovered(e1, alloc({0, 0}), 0) == Rational(3, 5));
  CHECK(toggle_of(e1, alloc({0, 0}), 0) == RuleToggle::kMarginalContribution);

  const Game e2 = make_e2();
  CHECK(best_own_uncovered(e2, alloc({0, 0}), 0) == Rational(1, 2));
  CHECK(best_reachable_uncovered(e2, alloc({0, 0}), 0) == Rational(2));
  CHECK(toggle_of(e2, alloc({0, 0}), 0) == RuleToggle::kGairing);

  // everything covered: the reachable-best falls back to zero
  const Game e3 = make_e3();
  CHECK(best_reachable_uncovered(e3, alloc({0, 1, 0}), 0) == Rational(0));
}

TEST_CASE("state-based utilities toggle between the extreme rules") {
  const Game e1 = make_e1();
  CHECK(sb_utility(e1, 2, alloc({0, 0}), 0) == Rational(0));  // mc share of a pair

  const Game e2 = make_e2();
  CHECK(sb_utility(e2, 2, alloc({0, 0}), 0) == Rational(1, 2));  // gairing share

  Game solo({{"r0", Rational(3, 4)}}, {{"a1", {0}, false}}, 1);
  CHECK(sb_utility(solo, 1, alloc({0}), 0) == Rational(3, 4));
}

TEST_CASE("state stats serialize the per-agent picture") {
  const Game e2 = make_e2();
  const auto stats = state_stats(e2, alloc({0, 0}));
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].toggle == RuleToggle::kGairing);
  CHECK(stats[0].v_value == Rational(1, 2));
  CHECK(stats[0].x_value == Rational(2));
  CHECK(stats[0].reach == std::vector<int>{1});
  // agent 2 ties at V = x = 2 (its own r2 is the best uncovered anywhere)
  CHECK(stats[1].toggle == RuleToggle::kMarginalContribution);
  CHECK(stats[1].v_value == Rational(2));
  CHECK(stats[1].x_value == Rational(2));
}

TEST_CASE("state-based analysis recovers full stability") {
  const Game e2 = make_e2();
  const EfficiencyReport report = sb_equilibrium_analysis(e2, 2);
  CHECK(report.pos == 1);
  CHECK(report.num_equilibria == 1);
  CHECK(report.equilibria[0] == alloc({0, 2}));
  CHECK(report.w_opt == Rational(3));
  CHECK(report.bound_pos == 1);
  CHECK(report.bound_poa == optimal_poa(2));
}

TEST_CASE("state-based analysis matches the definitional equilibrium test") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const Game game = random_instance(seed, 4, 4, 3, ValueLaw::kUniform01);
    const EfficiencyReport report =
        sb_equilibrium_analysis(game, game.k(), kDefaultProfileCap, Rational(0), 1u << 20);
    const ProfileSpace space(game);
    std::vector<Allocation> slow;
    for (uint64_t idx = 0; idx < space.count(); ++idx) {
      const Allocation a = space.allocation_at(idx);
      if (sb_is_equilibrium(game, game.k(), a)) slow.push_back(a);
    }
    CHECK(report.equilibria == slow);
  }
}

TEST_CASE("the optimum is a state-based equilibrium on random games") {
  for (uint64_t seed = 100; seed < 160; ++seed) {
    const Game game = random_instance(seed, 4, 5, 4,
                                      seed % 2 ? ValueLaw::kUniform01 : ValueLaw::kInteger1to10);
    const auto [opt, w] = brute_force_optimum(game);
    CHECK(sb_is_equilibrium(game, game.k(), opt));
    for (int i = 0; i < game.num_agents(); ++i)
      CHECK(best_own_uncovered(game, opt, i) >= best_reachable_uncovered(game, opt, i));
  }
}

TEST_CASE("toggles agree across an agent's own alternatives") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Game game = random_instance(3000 + trial % 40, 5, 5, 3, ValueLaw::kUniform01);
    const ProfileSpace space(game);
    Allocation a = space.allocation_at(rng.below(space.count()));
    const int agent = static_cast<int>(rng.below(5));
    bool first = true;
    RuleToggle expected = RuleToggle::kMarginalContribution;
    for (int32_t alt : game.agent(agent).actions) {
      Allocation b = a;
      b.choice[agent] = alt;
      const RuleToggle t = toggle_of(game, b, agent);
      if (first) {
        expected = t;
        first = false;
      } else {
        CHECK(t == expected);
      }
    }
  }
}

TEST_CASE("gairing share dominates the marginal share") {
  for (int k = 1; k <= 12; ++k) {
    const DistributionRule gar = gairing_rule(k);
    const DistributionRule mc = marginal_contribution_rule(k);
    for (int j = 1; j <= k; ++j) CHECK(gar(j) >= mc(j));
  }
}

namespace {

// one shared prize, one cheap private: the state-based equilibrium parks
// agent 1 on the private under the marginal toggle, yet the Gairing rule
// would pay more at the shared resource, so H_1 = {shared}
Game make_displacement_game() {
  return Game({{"s", Rational(1)}, {"p", Rational(2, 5)}},
              {{"a1", {0, 1}, false}, {"a2", {0}, false}}, 2);
}

}  // namespace

TEST_CASE("reduction with an empty displacement set changes only the rule") {
  const Game e1 = make_e1();
  const Allocation ne = alloc({1, 0});
  REQUIRE(sb_is_equilibrium(e1, 2, ne));
  const ReducedGame reduced = reduction_game(e1, 2, ne);
  CHECK(reduced.rule == gairing_rule(2));
  for (int i = 0; i < 2; ++i) {
    CHECK(reduced.game.agent(i).actions == e1.agent(i).actions);
    CHECK_FALSE(reduced.game.agent(i).allow_null);
  }
  CHECK(is_equilibrium(reduced.game, reduced.rule, ne, Rational(0)));
}

TEST_CASE("reduction strips the Gairing-improving resource and adds the idle ones") {
  const Game game = make_displacement_game();
  const Allocation ne = alloc({1, 0});  // agent 1 on the private, agent 2 on the prize
  REQUIRE(sb_is_equilibrium(game, 2, ne));
  // gairing would pay 1/2 at the shared prize against 2/5 at the private
  const ReducedGame reduced = reduction_game(game, 2, ne);
  CHECK(reduced.game.agent(0).actions == std::vector<int32_t>{1});  // shared removed, no idle Q-resources
  CHECK(reduced.game.agent(0).allow_null);
  CHECK(reduced.game.agent(1).actions == std::vector<int32_t>{0});
  CHECK_FALSE(reduced.game.agent(1).allow_null);
  CHECK(is_equilibrium(reduced.game, reduced.rule, ne, Rational(0)));

  // the removed resource is covered by the other agent at equilibrium
  CHECK(ne.choice[1] == 0);

  // repair: the optimum (p, s) survives inside the reduced sets
  const auto [opt, w_opt] = brute_force_optimum(game);
  const Allocation repaired = repair_allocation(reduced, opt);
  CHECK(welfare(reduced.game, repaired) == w_opt);

  // and the reduced optimum is no worse
  const auto [opt_r, w_opt_r] = brute_force_optimum(reduced.game);
  CHECK(w_opt_r >= w_opt);
}

TEST_CASE("reduction requires an equilibrium") {
  const Game e2 = make_e2();
  CHECK_THROWS_AS(reduction_game(e2, 2, alloc({0, 0})), std::invalid_argument);
}

TEST_CASE("repair resolves a single displaced owner with one swap") {
  // hand-built reduced game: agent a lost r0 (kept action w plus null),
  // agent b still holds both; at equilibrium b sits on r0
  Game gprime({{"r0", Rational(1)}, {"w", Rational(1, 2)}},
              {{"a", {1}, true}, {"b", {0, 1}, true}}, 2);
  const ReducedGame reduced{gprime, gairing_rule(2), alloc({1, 0})};
  const Allocation a_opt = alloc({0, kNullChoice});  // a's optimal choice was r0
  const Allocation repaired = repair_allocation(reduced, a_opt);
  CHECK(repaired == alloc({kNullChoice, 0}));  // b swings back to r0, a idles
  CHECK(welfare(gprime, repaired) == welfare(gprime, a_opt));
}

TEST_CASE("repair walks an equilibrium chain") {
  // a lost r0; the carrier b holds its own optimal w, and a can absorb w
  Game gprime({{"r0", Rational(1)}, {"w", Rational(1, 2)}},
              {{"a", {1}, true}, {"b", {0, 1}, false}}, 2);
  const ReducedGame reduced{gprime, gairing_rule(2), alloc({1, 0})};
  const Allocation a_opt = alloc({0, 1});
  const Allocation repaired = repair_allocation(reduced, a_opt);
  CHECK(repaired == alloc({1, 0}));  // b takes r0, a takes the vacated w
  CHECK(welfare(gprime, repaired) == welfare(gprime, a_opt));
}

TEST_CASE("repair stress: displaced agents and real chain moves occur and resolve") {
  int displaced_games = 0;
  int nontrivial_repairs = 0;
  for (uint64_t seed = 9000; seed < 9300; ++seed) {
    const int k = 2 + static_cast<int>(seed % 2);
    const Game game = random_instance(seed, 5, 5, k,
                                      seed % 2 ? ValueLaw::kUniform01 : ValueLaw::kInteger1to10);
    const EfficiencyReport analysis = sb_equilibrium_analysis(game, game.k());
    const ReducedGame reduced = reduction_game(game, game.k(), analysis.worst_equilibrium);

    bool displaced = false;
    for (int i = 0; i < game.num_agents(); ++i)
      if (reduced.game.agent(i).allow_null && !game.agent(i).allow_null) displaced = true;
    displaced_games += displaced;

    const auto [opt, w_opt] = brute_force_optimum(game);
    const Allocation repaired = repair_allocation(reduced, opt);
    CHECK(welfare(reduced.game, repaired) == w_opt);
    for (int i = 0; i < game.num_agents(); ++i) {
      const int32_t kept = reduced.game.agent_has_action(i, opt.choice[i]) ? opt.choice[i]
                                                                           : kNullChoice;
      if (repaired.choice[i] != kept) {
        ++nontrivial_repairs;
        break;
      }
    }
  }
  // the sweep must actually exercise the interesting paths
  CHECK(displaced_games > 100);
  CHECK(nontrivial_repairs >= 3);
}

TEST_CASE("reduction and repair hold across a random sweep") {
  for (uint64_t seed = 500; seed < 540; ++seed) {
    const Game game = random_instance(seed, 4, 4, 3,
                                      seed % 2 ? ValueLaw::kUniform01 : ValueLaw::kInteger1to10);
    const EfficiencyReport analysis = sb_equilibrium_analysis(game, game.k());
    const Allocation a_ne = analysis.worst_equilibrium;
    const ReducedGame reduced = reduction_game(game, game.k(), a_ne);

    CHECK(is_equilibrium(reduced.game, reduced.rule, a_ne, Rational(0)));

    const auto [opt_g, w_g] = brute_force_optimum(game);
    const auto [opt_r, w_r] = brute_force_optimum(reduced.game);
    CHECK(w_r >= w_g);

    const Allocation repaired = repair_allocation(reduced, opt_g);
    CHECK(welfare(reduced.game, repaired) == w_g);

    // removed actions are someone else's equilibrium choice
    for (int i = 0; i < game.num_agents(); ++i)
      for (int32_t r : game.agent(i).actions) {
        if (reduced.game.agent_has_action(i, r)) continue;
        bool held = false;
        for (int j = 0; j < game.num_agents(); ++j)
          if (j != i && a_ne.choice[j] == r) held = true;
        CHECK(held);
      }
  }
}
