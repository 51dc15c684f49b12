#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covergame/equilibrium.hpp"
#include "covergame/errors.hpp"
#include "covergame/instances.hpp"
#include "covergame/io.hpp"
#include "covergame/scan.hpp"
#include "test_games.hpp"

using namespace covergame;
using namespace covergame::testing;

TEST_CASE("level family reproduces the geometric worst case") {
  const DistributionRule f = half_rule();  // gairing_rule(2)

  SUBCASE("claimed welfare identities hold exactly") {
    const GeneratedInstance inst = level_instance(f, 1, 20);
    const Rational gamma(1, 2);
    Rational pow = 1;
    Rational sum = 0;
    for (int l = 0; l <= 20; ++l) {
      sum += pow;
      pow *= gamma;
    }
    CHECK(*inst.provenance.claimed_ne_welfare == sum);
    CHECK(welfare(inst.game, *inst.provenance.claimed_equilibrium) == sum);
    CHECK(validate(inst.game).valid());
    CHECK(inst.game.cardinality() == 2);
  }

  SUBCASE("enumerated ratio approaches the anarchy bound") {
    const GeneratedInstance inst = level_instance(f, 1, 20);
    const uint64_t profiles = ProfileSpace(inst.game).count();
    REQUIRE(profiles == uint64_t(1) << 21);
    const EfficiencyReport report = efficiency(inst.game, f, profiles, Rational(0), 0, 0);
    // worst equilibrium over optimum converges at rate gamma^m
    const Rational gap = abs(report.poa - Rational(2, 3));
    CHECK(gap > 0);
    CHECK(gap < Rational(1, 1000000));
    CHECK(report.w_opt == *inst.provenance.claimed_opt_welfare);
  }

  SUBCASE("multi-agent levels verify both closed forms") {
    const DistributionRule g3 = gairing_rule(3);
    const GeneratedInstance inst = level_instance(g3, 2, 3);
    CHECK(validate(inst.game).valid());
    CHECK(inst.game.cardinality() == 3);
    // brute force confirms the constructed optimum really is optimal here
    const auto [opt, w_opt] = brute_force_optimum(inst.game);
    CHECK(w_opt == *inst.provenance.claimed_opt_welfare);
  }

  SUBCASE("rejects flat and out-of-range parameters") {
    CHECK_THROWS_AS(level_instance(marginal_contribution_rule(3), 2, 5), std::domain_error);
    CHECK_THROWS_AS(level_instance(f, 2, 5), std::domain_error);  // j > k-1
    CHECK_THROWS_AS(level_instance(f, 1, 0), std::domain_error);
  }
}

TEST_CASE("simple tight family meets the anarchy bound exactly") {
  for (int k = 2; k <= 4; ++k) {
    const DistributionRule f = gairing_rule(k);
    const GeneratedInstance inst = simple_tight_instance(f, k);
    CHECK(validate(inst.game).valid());
    CHECK(inst.game.k() == k);
    CHECK(inst.game.num_resources() == k + 1);
    const EfficiencyReport report = efficiency(inst.game, f, 1u << 20, Rational(0));
    CHECK(report.poa == poa_bound(f));
    CHECK(report.w_worst == 1);
  }

  // the flat rule: optimum coincides with the shared equilibrium at j = 2
  const GeneratedInstance mc2 = simple_tight_instance(marginal_contribution_rule(2), 2);
  CHECK(*mc2.provenance.claimed_opt_welfare == 1);

  CHECK_THROWS_AS(simple_tight_instance(gairing_rule(2), 3), std::domain_error);
}

TEST_CASE("stability family pins the unique equilibrium") {
  const DistributionRule f = gairing_rule(2);
  const GeneratedInstance inst = pos_family_instance(f, 2, Rational(1, 100));
  CHECK(validate(inst.game).valid());
  const EfficiencyReport report = efficiency(inst.game, f, 1000, Rational(0));
  CHECK(report.num_equilibria == 1);
  CHECK(report.pos == Rational(100, 149));
  CHECK(report.w_opt == Rational(149, 100));

  // epsilon must fit under f(j): the flat rule leaves no room beyond j = 1
  CHECK_THROWS_AS(pos_family_instance(marginal_contribution_rule(3), 2, Rational(1, 1000)),
                  std::domain_error);
  CHECK_THROWS_AS(pos_family_instance(f, 2, Rational(0)), std::domain_error);
  CHECK_THROWS_AS(pos_family_instance(f, 2, Rational(1)), std::domain_error);
}

TEST_CASE("stability family approaches the stability bound as eps vanishes") {
  const DistributionRule f = gairing_rule(3);
  const GeneratedInstance inst = pos_family_instance(f, 3, Rational(1, 100000));
  const EfficiencyReport report = efficiency(inst.game, f, 1000, Rational(0));
  CHECK(abs(report.pos - pos_bound(f)) < Rational(1, 10000));
}

TEST_CASE("random instances are deterministic and within bounds") {
  const Game a = random_instance(7, 5, 6, 3, ValueLaw::kUniform01);
  const Game b = random_instance(7, 5, 6, 3, ValueLaw::kUniform01);
  CHECK(game_to_json(a) == game_to_json(b));
  CHECK_FALSE(game_to_json(a) == game_to_json(random_instance(8, 5, 6, 3, ValueLaw::kUniform01)));

  for (uint64_t seed = 1; seed <= 1000; ++seed) {
    const int resources = 1 + static_cast<int>(seed % 6);
    const int k = 1 + static_cast<int>(seed % 4);
    const int n = std::min<int>(1 + seed % 5, k * resources);
    const Game game = random_instance(seed, n, resources, k,
                                      seed % 2 ? ValueLaw::kUniform01 : ValueLaw::kInteger1to10);
    const ValidationReport report = validate(game);
    CHECK(report.valid());
    CHECK(report.cardinality <= game.k());
  }

  CHECK_THROWS_AS(random_instance(1, 3, 2, 0, ValueLaw::kUniform01), std::domain_error);
  CHECK_THROWS_AS(random_instance(1, 9, 2, 1, ValueLaw::kUniform01), std::domain_error);
}

TEST_CASE("single-agent games are fully efficient under any paying rule") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const Game game = random_instance(seed, 1, 4, 2, ValueLaw::kInteger1to10);
    const EfficiencyReport report = efficiency(game, half_rule());
    CHECK(report.poa == 1);
    CHECK(report.pos == 1);
  }
}

TEST_CASE("integer value law draws integers in range") {
  const Game game = random_instance(42, 3, 6, 2, ValueLaw::kInteger1to10);
  for (const auto& r : game.resources()) {
    CHECK(denominator(r.value) == 1);
    CHECK(r.value >= 1);
    CHECK(r.value <= 10);
  }
}
