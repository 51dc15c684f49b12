#include "covergame/instances.hpp"

#include <algorithm>
#include <stdexcept>

#include "covergame/equilibrium.hpp"
#include "covergame/errors.hpp"
#include "covergame/scan.hpp"

namespace covergame {

namespace {

constexpr uint64_t kSelfCheckCap = 1u << 20;

void require_unit_head(const DistributionRule& f, const char* family) {
  if (f(1) > 1)
    throw std::domain_error(std::string(family) +
                            " construction needs f(1) <= 1 (lone share above the full value "
                            "breaks the shared-resource equilibrium)");
}

void check_claimed_equilibrium(const Game& game, const DistributionRule& f, const Allocation& ne,
                               const char* family) {
  if (!validate(game).valid())
    throw InternalInconsistencyError(std::string(family) + " generator built an invalid game");
  if (!is_equilibrium(game, f, ne, Rational(0)))
    throw InternalInconsistencyError(std::string(family) +
                                     " claimed equilibrium fails the exact equilibrium check");
}

std::string param(const Rational& v) { return to_fraction_string(v); }

}  // namespace

GeneratedInstance level_instance(const DistributionRule& f, int j, int m) {
  if (j < 1 || j > f.k() - 1) throw std::domain_error("level family needs 1 <= j <= k-1");
  if (m < 1) throw std::domain_error("level family needs m >= 1");
  if (f(j) <= f(j + 1))
    throw std::domain_error(
        "level family needs f(j) > f(j+1); use the simple tight family for the flat case");
  require_unit_head(f, "level");

  const Rational fj = f(j);
  const Rational gamma = f(j + 1) / fj;

  std::vector<Resource> resources;
  std::vector<Agent> agents;
  std::vector<int32_t> ne_choice;     // parallel to agents
  std::vector<int32_t> opt_choice;

  const auto add_resource = [&](const std::string& id, const Rational& value) {
    resources.push_back(Resource{id, value});
    return static_cast<int32_t>(resources.size() - 1);
  };

  Rational gamma_pow = 1;
  int32_t prev_common = -1;
  for (int level = 0; level <= m; ++level) {
    const std::string suffix = std::to_string(level);
    const int32_t common = add_resource("common_" + suffix, gamma_pow);
    const int privates = level == 0 ? j : j - 1;
    for (int t = 0; t < privates; ++t) {
      const int32_t priv =
          add_resource("private_" + suffix + "_" + std::to_string(t), gamma_pow * fj);
      agents.push_back(Agent{"agent_" + suffix + "_" + std::to_string(t), {priv, common}, false});
      ne_choice.push_back(common);
      // the optimum keeps every private covered except one at the last level
      const bool sacrificed = level == m && t == 0 && j >= 2;
      opt_choice.push_back(sacrificed ? common : priv);
    }
    if (level > 0) {
      agents.push_back(Agent{"link_" + suffix, {prev_common, common}, false});
      ne_choice.push_back(common);
      opt_choice.push_back(prev_common);
    }
    prev_common = common;
    gamma_pow *= gamma;
  }

  Game game(std::move(resources), std::move(agents), j + 1);
  const Allocation ne{ne_choice};
  const Allocation opt{opt_choice};
  check_claimed_equilibrium(game, f, ne, "level");

  // gamma_pow is now gamma^{m+1}
  const Rational w_ne = (1 - gamma_pow) / (1 - gamma);
  const Rational w_opt = w_ne * (1 + (j - 1) * fj) + fj * (1 - gamma_pow / gamma);
  if (welfare(game, ne) != w_ne)
    throw InternalInconsistencyError("level equilibrium welfare disagrees with the closed form");
  if (welfare(game, opt) != w_opt)
    throw InternalInconsistencyError("level optimal welfare disagrees with the closed form");

  GeneratedInstance out{std::move(game),
                        InstanceProvenance{"level",
                                           {{"j", std::to_string(j)},
                                            {"m", std::to_string(m)},
                                            {"gamma", param(gamma)},
                                            {"f_j", param(fj)}},
                                           ne,
                                           w_ne,
                                           w_opt}};
  return out;
}

GeneratedInstance simple_tight_instance(const DistributionRule& f, int j) {
  if (j < 1 || j > f.k()) throw std::domain_error("simple family needs 1 <= j <= k");
  require_unit_head(f, "simple");

  std::vector<Resource> resources;
  resources.push_back(Resource{"shared", Rational(1)});
  std::vector<Agent> agents;
  std::vector<int32_t> ne_choice(j, 0), opt_choice(j, 0);
  for (int t = 1; t <= j; ++t) {
    // agent 1's private is worthless: it pads the resource count to j+1
    // without moving any welfare
    const Rational value = t == 1 ? Rational(0) : f(j);
    resources.push_back(Resource{"private_" + std::to_string(t), value});
    agents.push_back(
        Agent{"agent_" + std::to_string(t), {0, static_cast<int32_t>(t)}, false});
    if (t >= 2) opt_choice[t - 1] = static_cast<int32_t>(t);
  }

  Game game(std::move(resources), std::move(agents), j);
  const Allocation ne{ne_choice};
  check_claimed_equilibrium(game, f, ne, "simple");
  if (welfare(game, ne) != 1)
    throw InternalInconsistencyError("simple equilibrium welfare should be exactly 1");

  const Rational w_opt_claim = 1 + (j - 1) * f(j);
  if (welfare(game, Allocation{opt_choice}) != w_opt_claim)
    throw InternalInconsistencyError("simple optimal welfare disagrees with the closed form");
  if (ProfileSpace(game).count() <= kSelfCheckCap) {
    const auto [opt, w_opt] = brute_force_optimum(game, kSelfCheckCap);
    if (w_opt != w_opt_claim)
      throw InternalInconsistencyError("simple brute-force optimum disagrees with the closed form");
  }

  GeneratedInstance out{std::move(game),
                        InstanceProvenance{"simple",
                                           {{"j", std::to_string(j)}, {"f_j", param(f(j))}},
                                           ne,
                                           Rational(1),
                                           w_opt_claim}};
  return out;
}

GeneratedInstance pos_family_instance(const DistributionRule& f, int j, const Rational& eps) {
  if (j < 1 || j > f.k()) throw std::domain_error("stability family needs 1 <= j <= k");
  if (eps <= 0 || eps >= f(j))
    throw std::domain_error("stability family needs 0 < eps < f(j)");
  require_unit_head(f, "stability");

  std::vector<Resource> resources;
  resources.push_back(Resource{"r0", Rational(1)});
  std::vector<Agent> agents;
  std::vector<int32_t> ne_choice(j, 0), opt_choice(j, 0);
  for (int t = 1; t <= j; ++t) {
    resources.push_back(Resource{"r" + std::to_string(t), f(j) - eps});
    agents.push_back(
        Agent{"agent_" + std::to_string(t), {0, static_cast<int32_t>(t)}, false});
    if (t >= 2) opt_choice[t - 1] = static_cast<int32_t>(t);
  }

  Game game(std::move(resources), std::move(agents), j);
  const Allocation ne{ne_choice};
  check_claimed_equilibrium(game, f, ne, "stability");

  if (ProfileSpace(game).count() > kSelfCheckCap)
    throw std::domain_error("stability family too large for its uniqueness self-check");
  const auto equilibria = enumerate_equilibria(game, f, kSelfCheckCap, Rational(0));
  if (equilibria.size() != 1 || !(equilibria[0] == ne))
    throw InternalInconsistencyError("all-on-r0 should be the unique equilibrium");
  const Rational w_opt_claim = 1 + (j - 1) * (f(j) - eps);
  const auto [opt, w_opt] = brute_force_optimum(game, kSelfCheckCap);
  if (w_opt != w_opt_claim)
    throw InternalInconsistencyError("stability family optimum disagrees with the closed form");

  GeneratedInstance out{std::move(game),
                        InstanceProvenance{"pos_family",
                                           {{"j", std::to_string(j)},
                                            {"eps", param(eps)},
                                            {"f_j", param(f(j))}},
                                           ne,
                                           Rational(1),
                                           w_opt_claim}};
  return out;
}

Game random_instance(uint64_t seed, int n, int num_resources, int k, ValueLaw law) {
  if (n < 1 || num_resources < 1) throw std::domain_error("need n >= 1 and resources >= 1");
  if (k < 1) throw std::domain_error("constraints unsatisfiable: k must be >= 1");
  if (static_cast<int64_t>(k) * num_resources < n)
    throw std::domain_error("constraints unsatisfiable: capacity k * resources < agents");

  SplitMix64 rng(seed);
  std::vector<Resource> resources;
  resources.reserve(num_resources);
  for (int r = 0; r < num_resources; ++r) {
    Rational value = law == ValueLaw::kUniform01
                         ? Rational(BigInt(rng.next() >> 34), BigInt(1) << 30)
                         : Rational(1 + static_cast<int64_t>(rng.below(10)));
    resources.push_back(Resource{"r" + std::to_string(r), std::move(value)});
  }

  std::vector<int> capacity(num_resources, k);
  const auto pick_from_pool = [&](const std::vector<char>& held) -> int32_t {
    std::vector<int32_t> pool;
    for (int32_t r = 0; r < num_resources; ++r)
      if (capacity[r] > 0 && !held[r]) pool.push_back(r);
    if (pool.empty()) return -1;
    return pool[rng.below(pool.size())];
  };

  std::vector<std::vector<int32_t>> actions(n);
  std::vector<std::vector<char>> held(n, std::vector<char>(num_resources, 0));
  // seed every agent with one resource first so capacity never runs out
  for (int i = 0; i < n; ++i) {
    const int32_t r = pick_from_pool(held[i]);
    if (r < 0) throw InternalInconsistencyError("capacity accounting is broken");
    actions[i].push_back(r);
    held[i][r] = 1;
    --capacity[r];
  }
  for (int i = 0; i < n; ++i) {
    const uint64_t extras = rng.below(static_cast<uint64_t>(num_resources));
    for (uint64_t e = 0; e < extras; ++e) {
      const int32_t r = pick_from_pool(held[i]);
      if (r < 0) break;
      actions[i].push_back(r);
      held[i][r] = 1;
      --capacity[r];
    }
    std::sort(actions[i].begin(), actions[i].end());
  }

  std::vector<Agent> agents;
  agents.reserve(n);
  for (int i = 0; i < n; ++i)
    agents.push_back(Agent{"a" + std::to_string(i), std::move(actions[i]), false});
  Game game(std::move(resources), std::move(agents), k);
  if (!validate(game).valid())
    throw InternalInconsistencyError("random generator built an invalid game");
  return game;
}

}  // namespace covergame
