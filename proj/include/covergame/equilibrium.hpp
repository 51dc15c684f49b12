#ifndef COVERGAME_EQUILIBRIUM_HPP
#define COVERGAME_EQUILIBRIUM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "covergame/game.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"

namespace covergame {

constexpr uint64_t kDefaultProfileCap = 2'000'000;
constexpr uint64_t kDefaultCollectLimit = 4096;

struct EfficiencyReport {
  std::vector<Allocation> equilibria;  // lexicographic order; may be truncated
  bool equilibria_truncated = false;
  uint64_t num_equilibria = 0;
  Allocation opt_allocation;
  Rational w_opt;
  Allocation worst_equilibrium;
  Rational w_worst;
  Allocation best_equilibrium;
  Rational w_best;
  Rational poa;  // realized: worst equilibrium welfare / optimal welfare
  Rational pos;  // realized: best equilibrium welfare / optimal welfare
  Rational bound_poa;
  Rational bound_pos;
};

/// No agent can gain more than tol by a unilateral move (weak inequality:
/// exact ties count, which the tight constructions rely on).
bool is_equilibrium(const Game& game, const DistributionRule& f, const Allocation& a,
                    const Rational& tol = default_tolerance());

/// All pure equilibria in declaration-order lexicographic order.
/// Throws CapExceededError when the profile space is larger than the cap.
std::vector<Allocation> enumerate_equilibria(const Game& game, const DistributionRule& f,
                                             uint64_t profile_cap = kDefaultProfileCap,
                                             const Rational& tol = default_tolerance(),
                                             int jobs = 0);

/// Welfare-maximizing allocation, lexicographic-first among ties.
std::pair<Allocation, Rational> brute_force_optimum(const Game& game,
                                                    uint64_t profile_cap = kDefaultProfileCap,
                                                    int jobs = 0);

/// phi(a) = sum_r sum_{j<=|a|_r} v_r f(j); unilateral differences equal
/// utility differences exactly.
Rational potential(const Game& game, const DistributionRule& f, const Allocation& a);

struct BrdStep {
  int agent;
  int32_t from;
  int32_t to;
  Rational potential_after;
};

struct BrdResult {
  Allocation allocation;
  std::vector<BrdStep> trace;
};

/// Repeatedly grants the lexicographically-first strictly-improving agent
/// its best deviation (ties: lowest resource index). The potential rises
/// strictly each step, so this terminates at an equilibrium; exceeding
/// max_steps would mean the ordering is broken and throws.
BrdResult best_response_dynamics(const Game& game, const DistributionRule& f, Allocation start,
                                 uint64_t max_steps);

/// Full exact analysis: equilibria, optimum and realized PoA/PoS next to
/// the closed-form bounds for f.
EfficiencyReport efficiency(const Game& game, const DistributionRule& f,
                            uint64_t profile_cap = kDefaultProfileCap,
                            const Rational& tol = default_tolerance(), int jobs = 0,
                            uint64_t collect_limit = kDefaultCollectLimit);

}  // namespace covergame

#endif
