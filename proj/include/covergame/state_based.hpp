#ifndef COVERGAME_STATE_BASED_HPP
#define COVERGAME_STATE_BASED_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "covergame/equilibrium.hpp"
#include "covergame/game.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"

namespace covergame {

/// Allocation-dependent information flow graph: edge i->j whenever agent
/// i's chosen resource lies in agent j's action set (no self loops; null
/// choices emit nothing).
struct InfoGraph {
  int num_agents = 0;
  std::vector<std::pair<int, int>> edges;  // (from, to), lexicographic
};

InfoGraph info_graph(const Game& game, const Allocation& a);

/// Agents that can reach `agent` through a directed path, ascending.
std::vector<int> reach_set(const InfoGraph& graph, int agent);

/// Q_i: the agent's own action set united with the action sets of every
/// agent that can reach it. Ascending resource indices.
std::vector<int32_t> enlarged_set(const Game& game, const Allocation& a, int agent);

/// V_i: best value in the agent's own set among resources no *other* agent
/// covers; 0 when that set is empty.
Rational best_own_uncovered(const Game& game, const Allocation& a, int agent);

/// x_i: best value in the enlarged set among resources nobody covers
/// (the agent itself included); 0 when empty.
Rational best_reachable_uncovered(const Game& game, const Allocation& a, int agent);

enum class RuleToggle { kMarginalContribution, kGairing };

/// Marginal contribution when V_i >= x_i, Gairing otherwise.
RuleToggle toggle_of(const Game& game, const Allocation& a, int agent);

/// State-based utility: v_{a_i} * f_mc(|a|_{a_i}) under the marginal
/// toggle, v_{a_i} * f_gar^k(|a|_{a_i}) otherwise.
Rational sb_utility(const Game& game, int k, const Allocation& a, int agent);

struct AgentStateStats {
  std::vector<int> reach;
  std::vector<int32_t> enlarged;
  Rational v_value;
  Rational x_value;
  RuleToggle toggle;
};

std::vector<AgentStateStats> state_stats(const Game& game, const Allocation& a);

/// Equilibrium test where each candidate deviation re-evaluates the toggle
/// at the deviated profile.
bool sb_is_equilibrium(const Game& game, int k, const Allocation& a,
                       const Rational& tol = Rational(0));

/// Exhaustive analysis under the state-based rule. Reported bounds are the
/// mechanism's guarantees: bound_pos = 1 and bound_poa = optimal_poa(k).
EfficiencyReport sb_equilibrium_analysis(const Game& game, int k,
                                         uint64_t profile_cap = kDefaultProfileCap,
                                         const Rational& tol = Rational(0),
                                         uint64_t collect_limit = kDefaultCollectLimit);

/// The game G' derived from (G, a_ne): agents with a strictly better
/// Gairing payoff somewhere (H_i nonempty) lose those resources, gain the
/// equilibrium-uncovered part of their enlarged set (B_i) plus the null
/// action; everyone else is untouched. G' is played under the Gairing rule.
struct ReducedGame {
  Game game;
  DistributionRule rule;
  Allocation equilibrium;  // a_ne, still an equilibrium of game under rule
};

ReducedGame reduction_game(const Game& game, int k, const Allocation& a_ne);

/// Rebuilds, inside the reduced game's action sets, an allocation whose
/// welfare equals the original optimum's: agents keep their optimal choice
/// when still available, then each uncovered optimal resource is recovered
/// by walking equilibrium choices (one round per resource, no agent moved
/// twice). Throws InternalInconsistencyError if a round cannot complete.
Allocation repair_allocation(const ReducedGame& reduced, const Allocation& a_opt);

}  // namespace covergame

#endif
