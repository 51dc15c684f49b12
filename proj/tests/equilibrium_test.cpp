#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covergame/equilibrium.hpp"
#include "covergame/errors.hpp"
#include "covergame/instances.hpp"
#include "covergame/scan.hpp"
#include "test_games.hpp"

using namespace covergame;
using namespace covergame::testing;

TEST_CASE("unilateral stability") {
  const Game e1 = make_e1();
  CHECK(is_equilibrium(e1, half_rule(), alloc({1, 0})));
  CHECK_FALSE(is_equilibrium(e1, half_rule(), alloc({0, 0})));  // a1 gains 0.6 over 0.5
  CHECK(is_equilibrium(e1, marginal_contribution_rule(2), alloc({0, 2})));
}

TEST_CASE("exhaustive equilibrium listing in lexicographic order") {
  const Game e1 = make_e1();
  const auto mc = enumerate_equilibria(e1, marginal_contribution_rule(2));
  REQUIRE(mc.size() == 2);
  CHECK(mc[0] == alloc({0, 2}));
  CHECK(mc[1] == alloc({1, 0}));

  const auto half = enumerate_equilibria(e1, half_rule());
  REQUIRE(half.size() == 1);
  CHECK(half[0] == alloc({1, 0}));

  Game solo({{"r0", Rational(1)}, {"r1", Rational(2)}}, {{"a1", {0, 1}, false}}, 1);
  const auto eqs = enumerate_equilibria(solo, DistributionRule({Rational(1)}));
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0] == alloc({1}));  // best response only
}

TEST_CASE("profile cap refusal carries the required count") {
  const Game e1 = make_e1();
  try {
    enumerate_equilibria(e1, half_rule(), 3);
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& e) {
    CHECK(e.required == 4);
  }
}

TEST_CASE("brute force optimum with lexicographic ties") {
  const Game e1 = make_e1();
  const auto [opt, w] = brute_force_optimum(e1);
  CHECK(opt == alloc({1, 0}));
  CHECK(w == Rational(8, 5));

  Game zero({{"r0", Rational(0)}, {"r1", Rational(0)}},
            {{"a1", {0, 1}, false}, {"a2", {0, 1}, false}}, 2);
  const auto [opt0, w0] = brute_force_optimum(zero);
  CHECK(w0 == 0);
  CHECK(opt0 == alloc({0, 0}));  // first profile wins the tie

  Game disjoint({{"r0", Rational(1)}, {"r1", Rational(2)}, {"r2", Rational(3)}},
                {{"a1", {0, 1}, false}, {"a2", {2}, false}}, 1);
  const auto [opt_d, w_d] = brute_force_optimum(disjoint);
  CHECK(opt_d == alloc({1, 2}));
  CHECK(w_d == Rational(5));
}

TEST_CASE("potential function values") {
  const Game e1 = make_e1();
  CHECK(potential(e1, half_rule(), alloc({0, 0})) == Rational(3, 2));

  // marginal contribution collapses the potential onto the welfare
  const Game e3 = make_e3();
  const DistributionRule mc = marginal_contribution_rule(3);
  const ProfileSpace space(e3);
  for (uint64_t idx = 0; idx < space.count(); ++idx) {
    const Allocation a = space.allocation_at(idx);
    CHECK(potential(e3, mc, a) == welfare(e3, a));
  }

  Game nullable({{"r0", Rational(1)}}, {{"a1", {0}, true}}, 1);
  CHECK(potential(nullable, DistributionRule({Rational(1)}), alloc({kNullChoice})) == 0);
}

TEST_CASE("potential differences equal utility differences") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const Game game = random_instance(1000 + trial, 4, 5, 3, ValueLaw::kUniform01);
    const DistributionRule f = trial % 2 ? equal_share_rule(3) : gairing_rule(3);
    const ProfileSpace space(game);
    Allocation a = space.allocation_at(rng.below(space.count()));
    const int agent = static_cast<int>(rng.below(4));
    const auto& acts = game.agent(agent).actions;
    Allocation b = a;
    b.choice[agent] = acts[rng.below(acts.size())];
    CHECK(potential(game, f, b) - potential(game, f, a) ==
          utility(game, f, agent, b) - utility(game, f, agent, a));
  }
}

TEST_CASE("the potential maximizer is an equilibrium") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const Game game = random_instance(seed, 4, 4, 3, ValueLaw::kUniform01);
    const DistributionRule f = gairing_rule(3);
    const ProfileSpace space(game);
    uint64_t best = 0;
    Rational best_phi = -1;
    for (uint64_t idx = 0; idx < space.count(); ++idx) {
      const Rational phi = potential(game, f, space.allocation_at(idx));
      if (phi > best_phi) {
        best_phi = phi;
        best = idx;
      }
    }
    CHECK(is_equilibrium(game, f, space.allocation_at(best), Rational(0)));
  }
}

TEST_CASE("best response dynamics") {
  const Game e1 = make_e1();

  SUBCASE("single improving step") {
    const BrdResult r = best_response_dynamics(e1, half_rule(), alloc({0, 0}), 100);
    CHECK(r.allocation == alloc({1, 0}));
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].agent == 0);
    CHECK(r.trace[0].to == 1);
  }
  SUBCASE("fixed point stays put") {
    const BrdResult r = best_response_dynamics(e1, half_rule(), alloc({1, 0}), 100);
    CHECK(r.trace.empty());
  }
  SUBCASE("lexicographic agent order drives the trace") {
    const BrdResult r =
        best_response_dynamics(e1, marginal_contribution_rule(2), alloc({0, 0}), 100);
    CHECK(r.allocation == alloc({1, 0}));
    CHECK(r.trace.size() == 1);
  }
  SUBCASE("strictly increasing potential, bounded length") {
    for (uint64_t seed = 50; seed < 80; ++seed) {
      const Game game = random_instance(seed, 5, 5, 3, ValueLaw::kUniform01);
      const DistributionRule f = gairing_rule(3);
      const ProfileSpace space(game);
      SplitMix64 rng(seed);
      const Allocation start = space.allocation_at(rng.below(space.count()));
      const BrdResult r = best_response_dynamics(game, f, start, space.count());
      CHECK(r.trace.size() <= space.count());
      Rational phi = potential(game, f, start);
      for (const BrdStep& step : r.trace) {
        CHECK(step.potential_after > phi);
        phi = step.potential_after;
      }
      CHECK(is_equilibrium(game, f, r.allocation, Rational(0)));
    }
  }
}

TEST_CASE("efficiency reports") {
  const Game e1 = make_e1();

  const EfficiencyReport mc = efficiency(e1, marginal_contribution_rule(2));
  CHECK(mc.poa == Rational(7, 8));
  CHECK(mc.pos == 1);
  CHECK(mc.w_opt == Rational(8, 5));
  CHECK(mc.num_equilibria == 2);
  CHECK(mc.bound_poa == Rational(1, 2));
  CHECK(mc.bound_pos == 1);

  const EfficiencyReport half = efficiency(e1, half_rule());
  CHECK(half.poa == 1);
  CHECK(half.pos == 1);

  Game zero({{"r0", Rational(0)}}, {{"a1", {0}, false}}, 1);
  const EfficiencyReport degenerate = efficiency(zero, DistributionRule({Rational(1)}));
  CHECK(degenerate.poa == 1);
  CHECK(degenerate.pos == 1);
}

TEST_CASE("profile indexing round-trips") {
  Game game({{"r0", Rational(1)}, {"r1", Rational(2)}},
            {{"a1", {0, 1}, false}, {"a2", {0}, true}, {"a3", {1, 0}, false}}, 3);
  const ProfileSpace space(game);
  REQUIRE(space.count() == 8);
  for (uint64_t idx = 0; idx < space.count(); ++idx)
    CHECK(space.index_of(space.allocation_at(idx)) == idx);
}

TEST_CASE("optimized scan equals the serial reference") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    const Game game = random_instance(seed, 4, 5, 3, ValueLaw::kUniform01);
    for (const DistributionRule& f :
         {marginal_contribution_rule(3), gairing_rule(3), equal_share_rule(3)}) {
      const Rational tol = seed % 2 ? Rational(0) : default_tolerance();
      const ScanResult reference = scan_profiles_reference(game, f, tol, 1u << 20);
      for (int jobs : {1, 3}) {
        const ScanResult fast = scan_profiles(game, f, tol, 1u << 20, jobs);
        CHECK(fast.profiles == reference.profiles);
        CHECK(fast.num_equilibria == reference.num_equilibria);
        CHECK(fast.opt_index == reference.opt_index);
        CHECK(fast.opt_welfare == reference.opt_welfare);
        CHECK(fast.worst_eq_index == reference.worst_eq_index);
        CHECK(fast.worst_eq_welfare == reference.worst_eq_welfare);
        CHECK(fast.best_eq_index == reference.best_eq_index);
        CHECK(fast.best_eq_welfare == reference.best_eq_welfare);
        CHECK(fast.equilibrium_indices == reference.equilibrium_indices);
      }
    }
  }
}

TEST_CASE("rational fallback kernel matches the reference when int64 scaling overflows") {
  // a value with a huge prime-power denominator defeats the fixed-point scale
  const Rational tiny(1, pow(BigInt(3), 160));
  Game game({{"r0", Rational(1)}, {"r1", tiny}, {"r2", Rational(1, 3)}},
            {{"a1", {0, 1}, false}, {"a2", {0, 2}, false}, {"a3", {1, 2}, false}}, 3);
  const DistributionRule f = gairing_rule(3);
  CHECK_FALSE(integer_kernel_applicable(game, f, Rational(0)));
  const ScanResult reference = scan_profiles_reference(game, f, Rational(0), 100);
  const ScanResult fast = scan_profiles(game, f, Rational(0), 100, 2);
  CHECK(fast.num_equilibria == reference.num_equilibria);
  CHECK(fast.opt_index == reference.opt_index);
  CHECK(fast.worst_eq_welfare == reference.worst_eq_welfare);
  CHECK(fast.equilibrium_indices == reference.equilibrium_indices);
}

TEST_CASE("null actions enter the deviation set") {
  // with the shared resource paying zero to a pair, parking on it is still
  // weakly stable; the null action never strictly improves
  Game game({{"r0", Rational(1)}}, {{"a1", {0}, true}, {"a2", {0}, true}}, 2);
  const DistributionRule mc = marginal_contribution_rule(2);
  CHECK(is_equilibrium(game, mc, alloc({0, 0}), Rational(0)));
  CHECK_FALSE(is_equilibrium(game, mc, alloc({kNullChoice, kNullChoice}), Rational(0)));
  const auto eqs = enumerate_equilibria(game, mc, 100, Rational(0));
  CHECK(eqs.size() == 3);  // all but the empty profile, where covering strictly pays
}
