#include "covergame/state_based.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <stdexcept>

#include "covergame/errors.hpp"
#include "covergame/scan.hpp"

namespace covergame {

namespace {

void require_valid(const Game& game, const Allocation& a) {
  if (!game.is_valid_allocation(a)) throw std::invalid_argument("allocation invalid for game");
}

void require_rule_k(const Game& game, int k) {
  if (k < game.cardinality())
    throw std::domain_error("state-based rule needs k >= game cardinality");
}

std::vector<int> coverage_counts(const Game& game, const Allocation& a) {
  std::vector<int> counts(game.num_resources(), 0);
  for (int32_t c : a.choice)
    if (c != kNullChoice) ++counts[c];
  return counts;
}

}  // namespace

InfoGraph info_graph(const Game& game, const Allocation& a) {
  require_valid(game, a);
  InfoGraph graph;
  graph.num_agents = game.num_agents();
  for (int i = 0; i < game.num_agents(); ++i) {
    const int32_t r = a.choice[i];
    if (r == kNullChoice) continue;
    for (int j = 0; j < game.num_agents(); ++j)
      if (i != j && game.agent_has_action(j, r)) graph.edges.emplace_back(i, j);
  }
  return graph;
}

std::vector<int> reach_set(const InfoGraph& graph, int agent) {
  std::vector<std::vector<int>> preds(graph.num_agents);
  for (const auto& [from, to] : graph.edges) preds[to].push_back(from);

  std::vector<char> seen(graph.num_agents, 0);
  std::deque<int> frontier(preds[agent].begin(), preds[agent].end());
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    if (u == agent || seen[u]) continue;
    seen[u] = 1;
    for (int p : preds[u]) frontier.push_back(p);
  }
  std::vector<int> out;
  for (int u = 0; u < graph.num_agents; ++u)
    if (seen[u]) out.push_back(u);
  return out;
}

std::vector<int32_t> enlarged_set(const Game& game, const Allocation& a, int agent) {
  const InfoGraph graph = info_graph(game, a);
  std::set<int32_t> resources(game.agent(agent).actions.begin(),
                              game.agent(agent).actions.end());
  for (int j : reach_set(graph, agent))
    resources.insert(game.agent(j).actions.begin(), game.agent(j).actions.end());
  return {resources.begin(), resources.end()};
}

Rational best_own_uncovered(const Game& game, const Allocation& a, int agent) {
  require_valid(game, a);
  std::vector<char> covered_by_others(game.num_resources(), 0);
  for (int j = 0; j < game.num_agents(); ++j)
    if (j != agent && a.choice[j] != kNullChoice) covered_by_others[a.choice[j]] = 1;
  Rational best = 0;
  for (int32_t r : game.agent(agent).actions)
    if (!covered_by_others[r] && game.resource(r).value > best) best = game.resource(r).value;
  return best;
}

Rational best_reachable_uncovered(const Game& game, const Allocation& a, int agent) {
  require_valid(game, a);
  std::vector<char> covered(game.num_resources(), 0);
  for (int32_t c : a.choice)
    if (c != kNullChoice) covered[c] = 1;
  Rational best = 0;
  for (int32_t r : enlarged_set(game, a, agent))
    if (!covered[r] && game.resource(r).value > best) best = game.resource(r).value;
  return best;
}

RuleToggle toggle_of(const Game& game, const Allocation& a, int agent) {
  return best_own_uncovered(game, a, agent) >= best_reachable_uncovered(game, a, agent)
             ? RuleToggle::kMarginalContribution
             : RuleToggle::kGairing;
}

Rational sb_utility(const Game& game, int k, const Allocation& a, int agent) {
  require_valid(game, a);
  require_rule_k(game, k);
  const int32_t r = a.choice[agent];
  if (r == kNullChoice) return Rational(0);
  const int count = coverage_count(game, a, r);
  if (toggle_of(game, a, agent) == RuleToggle::kMarginalContribution)
    return count == 1 ? game.resource(r).value : Rational(0);
  return game.resource(r).value * gairing_rule(k)(count);
}

std::vector<AgentStateStats> state_stats(const Game& game, const Allocation& a) {
  require_valid(game, a);
  const InfoGraph graph = info_graph(game, a);
  std::vector<AgentStateStats> out;
  out.reserve(game.num_agents());
  for (int i = 0; i < game.num_agents(); ++i) {
    AgentStateStats stats;
    stats.reach = reach_set(graph, i);
    stats.enlarged = enlarged_set(game, a, i);
    stats.v_value = best_own_uncovered(game, a, i);
    stats.x_value = best_reachable_uncovered(game, a, i);
    stats.toggle = stats.v_value >= stats.x_value ? RuleToggle::kMarginalContribution
                                                  : RuleToggle::kGairing;
    out.push_back(std::move(stats));
  }
  return out;
}

bool sb_is_equilibrium(const Game& game, int k, const Allocation& a, const Rational& tol) {
  require_valid(game, a);
  require_rule_k(game, k);
  for (int i = 0; i < game.num_agents(); ++i) {
    const Rational current = sb_utility(game, k, a, i);
    Allocation b = a;
    for (int32_t alt : game.agent(i).actions) {
      if (alt == a.choice[i]) continue;
      b.choice[i] = alt;
      if (current + tol < sb_utility(game, k, b, i)) return false;
    }
  }
  return true;
}

namespace {

// Bitmask working set for the exhaustive state-based scan. The per-profile
// statistics (reach sets, Q_i, V_i, x_i) reduce to mask operations; the
// slow definitional functions above stay as the reference they are tested
// against.
struct SbContext {
  const Game& game;
  int k;
  std::vector<Rational> pay_mc;   // [r*(k+1)+c]
  std::vector<Rational> pay_gar;  // [r*(k+1)+c]
  std::vector<uint64_t> res_agents;  // r -> agents holding r in their set
  std::vector<uint64_t> agent_res;   // i -> action-set mask
  std::vector<int32_t> by_value;     // resources, value desc then index

  SbContext(const Game& g, int rule_k) : game(g), k(rule_k) {
    if (g.num_agents() > 64 || g.num_resources() > 64)
      throw std::domain_error("state-based scan supports at most 64 agents and 64 resources");
    const DistributionRule gar = gairing_rule(k);
    const int stride = k + 1;
    pay_mc.assign(static_cast<size_t>(g.num_resources()) * stride, Rational(0));
    pay_gar.assign(static_cast<size_t>(g.num_resources()) * stride, Rational(0));
    for (int32_t r = 0; r < g.num_resources(); ++r) {
      pay_mc[static_cast<size_t>(r) * stride + 1] = g.resource(r).value;
      for (int c = 1; c <= k; ++c)
        pay_gar[static_cast<size_t>(r) * stride + c] = g.resource(r).value * gar(c);
    }
    res_agents.assign(g.num_resources(), 0);
    agent_res.assign(g.num_agents(), 0);
    for (int i = 0; i < g.num_agents(); ++i)
      for (int32_t r : g.agent(i).actions) {
        res_agents[r] |= uint64_t(1) << i;
        agent_res[i] |= uint64_t(1) << r;
      }
    for (int32_t r = 0; r < g.num_resources(); ++r) by_value.push_back(r);
    std::stable_sort(by_value.begin(), by_value.end(), [&](int32_t a, int32_t b) {
      return g.resource(a).value > g.resource(b).value;
    });
  }

  // best value among mask's resources, 0 for the empty mask
  const Rational& best_value(uint64_t mask, const Rational& zero) const {
    for (int32_t r : by_value)
      if (mask >> r & 1) return game.resource(r).value;
    return zero;
  }
};

}  // namespace

EfficiencyReport sb_equilibrium_analysis(const Game& game, int k, uint64_t profile_cap,
                                         const Rational& tol, uint64_t collect_limit) {
  require_rule_k(game, k);
  const ProfileSpace space(game);
  if (space.overflowed() || space.count() > profile_cap) throw CapExceededError(space.count());
  const SbContext ctx(game, k);
  const int n = game.num_agents();
  const int stride = k + 1;
  const Rational zero = 0;

  ScanResult scan;
  std::vector<int32_t> digits(n);
  std::vector<int32_t> choice(n);
  std::vector<int> counts(game.num_resources(), 0);
  std::vector<uint64_t> in_mask(n);
  for (uint64_t idx = 0; idx < space.count(); ++idx) {
    space.decode(idx, digits.data());
    std::fill(counts.begin(), counts.end(), 0);
    uint64_t covered = 0;
    for (int i = 0; i < n; ++i) {
      choice[i] = space.actions()[i][digits[i]];
      if (choice[i] >= 0) {
        ++counts[choice[i]];
        covered |= uint64_t(1) << choice[i];
      }
    }
    Rational w = 0;
    for (int32_t r = 0; r < game.num_resources(); ++r)
      if (covered >> r & 1) w += game.resource(r).value;

    ++scan.profiles;
    if (scan.profiles == 1 || w > scan.opt_welfare) {
      scan.opt_welfare = w;
      scan.opt_index = idx;
    }

    // information flow graph, reversed adjacency
    std::fill(in_mask.begin(), in_mask.end(), 0);
    for (int u = 0; u < n; ++u) {
      if (choice[u] < 0) continue;
      uint64_t targets = ctx.res_agents[choice[u]] & ~(uint64_t(1) << u);
      while (targets) {
        const int w_agent = std::countr_zero(targets);
        targets &= targets - 1;
        in_mask[w_agent] |= uint64_t(1) << u;
      }
    }

    bool is_eq = true;
    for (int i = 0; i < n && is_eq; ++i) {
      // agents that reach i, then Q_i; neither depends on i's own choice
      uint64_t seen = 0;
      uint64_t frontier = in_mask[i] & ~(uint64_t(1) << i);
      while (frontier) {
        seen |= frontier;
        uint64_t next = 0;
        uint64_t iter = frontier;
        while (iter) {
          const int u = std::countr_zero(iter);
          iter &= iter - 1;
          next |= in_mask[u];
        }
        frontier = next & ~seen & ~(uint64_t(1) << i);
      }
      uint64_t q_mask = ctx.agent_res[i];
      uint64_t members = seen;
      while (members) {
        const int j = std::countr_zero(members);
        members &= members - 1;
        q_mask |= ctx.agent_res[j];
      }

      uint64_t covered_others = covered;
      if (choice[i] >= 0 && counts[choice[i]] == 1)
        covered_others &= ~(uint64_t(1) << choice[i]);
      const Rational& v_i = ctx.best_value(ctx.agent_res[i] & ~covered_others, zero);

      const auto utility_at = [&](int32_t alt, int count_with_alt) -> const Rational& {
        if (alt < 0) return zero;
        const uint64_t covered_all = covered_others | (uint64_t(1) << alt);
        const Rational& x_i = ctx.best_value(q_mask & ~covered_all, zero);
        const auto& table = v_i >= x_i ? ctx.pay_mc : ctx.pay_gar;
        return table[static_cast<size_t>(alt) * stride + count_with_alt];
      };

      const int32_t cur = choice[i];
      const Rational& ucur = utility_at(cur, cur >= 0 ? counts[cur] : 0);
      const auto& acts = space.actions()[i];
      for (int32_t alt : acts) {
        if (alt == cur) continue;
        const Rational& udev = utility_at(alt, alt >= 0 ? counts[alt] + 1 : 0);
        if (ucur + tol < udev) {
          is_eq = false;
          break;
        }
      }
    }
    if (!is_eq) continue;

    ++scan.num_equilibria;
    if (!scan.has_equilibrium) {
      scan.has_equilibrium = true;
      scan.worst_eq_welfare = scan.best_eq_welfare = w;
      scan.worst_eq_index = scan.best_eq_index = idx;
    } else {
      if (w < scan.worst_eq_welfare) {
        scan.worst_eq_welfare = w;
        scan.worst_eq_index = idx;
      }
      if (w > scan.best_eq_welfare) {
        scan.best_eq_welfare = w;
        scan.best_eq_index = idx;
      }
    }
    if (scan.equilibrium_indices.size() < collect_limit)
      scan.equilibrium_indices.push_back(idx);
    else
      scan.truncated = true;
  }

  if (!scan.has_equilibrium)
    throw InternalInconsistencyError(
        "state-based game without equilibrium; the optimum should be one");

  EfficiencyReport report;
  report.num_equilibria = scan.num_equilibria;
  report.equilibria_truncated = scan.truncated;
  for (uint64_t eq : scan.equilibrium_indices) report.equilibria.push_back(space.allocation_at(eq));
  report.opt_allocation = space.allocation_at(scan.opt_index);
  report.w_opt = scan.opt_welfare;
  report.worst_equilibrium = space.allocation_at(scan.worst_eq_index);
  report.w_worst = scan.worst_eq_welfare;
  report.best_equilibrium = space.allocation_at(scan.best_eq_index);
  report.w_best = scan.best_eq_welfare;
  if (report.w_opt == 0) {
    report.poa = 1;
    report.pos = 1;
  } else {
    report.poa = report.w_worst / report.w_opt;
    report.pos = report.w_best / report.w_opt;
  }
  report.bound_poa = optimal_poa(k);
  report.bound_pos = 1;
  return report;
}

ReducedGame reduction_game(const Game& game, int k, const Allocation& a_ne) {
  require_valid(game, a_ne);
  require_rule_k(game, k);
  if (!sb_is_equilibrium(game, k, a_ne))
    throw std::invalid_argument("reduction needs a state-based equilibrium");

  const DistributionRule gar = gairing_rule(k);
  const std::vector<int> counts = coverage_counts(game, a_ne);

  std::vector<Agent> agents;
  agents.reserve(game.num_agents());
  for (int i = 0; i < game.num_agents(); ++i) {
    const int32_t r_i = a_ne.choice[i];
    const Rational base =
        r_i == kNullChoice ? Rational(0) : game.resource(r_i).value * gar(counts[r_i]);

    std::set<int32_t> better;  // H_i
    for (int32_t r : game.agent(i).actions) {
      const int with_me = counts[r] + (r == r_i ? 0 : 1);
      if (base < game.resource(r).value * gar(with_me)) better.insert(r);
    }

    Agent agent = game.agent(i);
    if (!better.empty()) {
      std::vector<int32_t> actions;
      for (int32_t r : agent.actions)
        if (!better.count(r)) actions.push_back(r);
      for (int32_t r : enlarged_set(game, a_ne, i))
        if (counts[r] == 0 &&
            std::find(actions.begin(), actions.end(), r) == actions.end())
          actions.push_back(r);  // B_i, ascending, after the kept ones
      agent.actions = std::move(actions);
      agent.allow_null = true;
    }
    agents.push_back(std::move(agent));
  }

  // Added B_i actions can raise the combinatorial cardinality above the
  // original bound; the game object records the true bound while the rule
  // stays f_gar^k (no relevant profile exceeds coverage k).
  std::vector<int> holders(game.num_resources(), 0);
  for (const auto& agent : agents)
    for (int32_t r : agent.actions) ++holders[r];
  int bound = game.k();
  for (int h : holders) bound = std::max(bound, h);

  Game reduced(game.resources(), std::move(agents), bound);
  return ReducedGame{std::move(reduced), gar, a_ne};
}

Allocation repair_allocation(const ReducedGame& reduced, const Allocation& a_opt) {
  const Game& game = reduced.game;
  const Allocation& ne = reduced.equilibrium;
  const int n = game.num_agents();
  if (static_cast<int>(a_opt.choice.size()) != n)
    throw std::invalid_argument("optimal allocation has wrong arity");

  Allocation current;
  current.choice.assign(n, kNullChoice);
  for (int i = 0; i < n; ++i) {
    const int32_t want = a_opt.choice[i];
    if (want != kNullChoice && game.agent_has_action(i, want)) current.choice[i] = want;
  }

  const std::vector<int> ne_counts = coverage_counts(game, ne);
  const auto covered_now = [&](int32_t r) {
    return std::find(current.choice.begin(), current.choice.end(), r) != current.choice.end();
  };

  std::deque<int32_t> pending;  // uncovered optimal resources, ascending
  {
    std::set<int32_t> uncovered;
    for (int32_t r : a_opt.choice)
      if (r != kNullChoice && !covered_now(r)) uncovered.insert(r);
    pending.assign(uncovered.begin(), uncovered.end());
  }

  std::vector<char> moved(n, 0);  // agents given a non-initial choice

  // One round covers one pending resource by walking equilibrium choices.
  // Returns false (leaving no side effects) when the round would need an
  // already-consumed agent; such a round is retried after others commit.
  const auto try_round = [&](int32_t r0) -> bool {
    int owner = -1;  // i_0: lost its optimal choice r0
    for (int i = 0; i < n; ++i)
      if (a_opt.choice[i] == r0 && !game.agent_has_action(i, r0)) {
        owner = i;
        break;
      }
    if (owner < 0)
      throw InternalInconsistencyError("uncovered resource has no displaced owner");

    Allocation trial = current;
    std::vector<char> in_round(n, 0);
    int32_t cur = r0;
    for (int guard = 0; guard <= n; ++guard) {
      int carrier = -1;  // unmoved agent whose equilibrium choice is cur
      for (int j = 0; j < n; ++j)
        if (ne.choice[j] == cur && !moved[j] && !in_round[j]) {
          carrier = j;
          break;
        }
      if (carrier < 0) return false;
      if (!game.agent_has_action(carrier, cur))
        throw InternalInconsistencyError("equilibrium choice missing from reduced action set");

      const int32_t prev = trial.choice[carrier];
      trial.choice[carrier] = cur;
      in_round[carrier] = 1;
      if (prev == kNullChoice) {
        current = trial;
        for (int j = 0; j < n; ++j) moved[j] = moved[j] || in_round[j];
        return true;
      }
      cur = prev;
      if (ne_counts[cur] == 0) {
        // nobody to walk to; the displaced owner absorbs it via B_{i0},
        // any other idle agent holding it serves as a fallback
        int absorber = -1;
        if (trial.choice[owner] == kNullChoice && !moved[owner] &&
            game.agent_has_action(owner, cur)) {
          absorber = owner;
        } else {
          for (int j = 0; j < n && absorber < 0; ++j)
            if (trial.choice[j] == kNullChoice && !moved[j] && !in_round[j] &&
                game.agent_has_action(j, cur))
              absorber = j;
        }
        if (absorber < 0) return false;
        trial.choice[absorber] = cur;
        in_round[absorber] = 1;
        current = trial;
        for (int j = 0; j < n; ++j) moved[j] = moved[j] || in_round[j];
        return true;
      }
    }
    return false;
  };

  while (!pending.empty()) {
    bool progress = false;
    const size_t rounds = pending.size();
    for (size_t t = 0; t < rounds; ++t) {
      const int32_t r0 = pending.front();
      pending.pop_front();
      if (try_round(r0))
        progress = true;
      else
        pending.push_back(r0);
    }
    if (!progress)
      throw InternalInconsistencyError("allocation repair stalled; reduction lemma violated");
  }

  if (welfare(game, current) != welfare(game, a_opt))
    throw InternalInconsistencyError("repaired allocation lost welfare");
  return current;
}

}  // namespace covergame
