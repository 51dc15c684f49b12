#include "covergame/equilibrium.hpp"

#include <stdexcept>

#include "covergame/errors.hpp"
#include "covergame/scan.hpp"

namespace covergame {

namespace {

void require_valid(const Game& game, const Allocation& a) {
  if (!game.is_valid_allocation(a)) throw std::invalid_argument("allocation invalid for game");
}

uint64_t require_within_cap(const Game& game, uint64_t cap) {
  const ProfileSpace space(game);
  if (space.overflowed() || space.count() > cap) throw CapExceededError(space.count());
  return space.count();
}

}  // namespace

bool is_equilibrium(const Game& game, const DistributionRule& f, const Allocation& a,
                    const Rational& tol) {
  require_valid(game, a);
  const int n = game.num_agents();
  for (int i = 0; i < n; ++i) {
    const Rational current = utility(game, f, i, a);
    Allocation b = a;
    for (int32_t alt : game.agent(i).actions) {
      if (alt == a.choice[i]) continue;
      b.choice[i] = alt;
      if (current + tol < utility(game, f, i, b)) return false;
    }
    if (game.agent(i).allow_null && a.choice[i] != kNullChoice && current + tol < 0) return false;
  }
  return true;
}

std::vector<Allocation> enumerate_equilibria(const Game& game, const DistributionRule& f,
                                             uint64_t profile_cap, const Rational& tol,
                                             int jobs) {
  const uint64_t total = require_within_cap(game, profile_cap);
  const ScanResult scan = scan_profiles(game, f, tol, total, jobs);
  const ProfileSpace space(game);
  std::vector<Allocation> out;
  out.reserve(scan.equilibrium_indices.size());
  for (uint64_t idx : scan.equilibrium_indices) out.push_back(space.allocation_at(idx));
  return out;
}

std::pair<Allocation, Rational> brute_force_optimum(const Game& game, uint64_t profile_cap,
                                                    int jobs) {
  require_within_cap(game, profile_cap);
  // any rule works here; only welfare is inspected
  const ScanResult scan =
      scan_profiles(game, marginal_contribution_rule(std::max(1, game.cardinality())),
                    Rational(0), 0, jobs);
  const ProfileSpace space(game);
  return {space.allocation_at(scan.opt_index), scan.opt_welfare};
}

Rational potential(const Game& game, const DistributionRule& f, const Allocation& a) {
  require_valid(game, a);
  std::vector<int> counts(game.num_resources(), 0);
  for (int32_t c : a.choice)
    if (c != kNullChoice) ++counts[c];
  Rational out = 0;
  for (int32_t r = 0; r < game.num_resources(); ++r) {
    if (counts[r] > f.k())
      throw std::domain_error("rule undefined at coverage " + std::to_string(counts[r]));
    for (int j = 1; j <= counts[r]; ++j) out += game.resource(r).value * f(j);
  }
  return out;
}

BrdResult best_response_dynamics(const Game& game, const DistributionRule& f, Allocation start,
                                 uint64_t max_steps) {
  require_valid(game, start);
  BrdResult result;
  result.allocation = std::move(start);
  const int n = game.num_agents();

  for (uint64_t step = 0;; ++step) {
    int mover = -1;
    int32_t target = kNullChoice;
    Rational best_gain;
    for (int i = 0; i < n && mover < 0; ++i) {
      const Rational current = utility(game, f, i, result.allocation);
      Allocation b = result.allocation;
      for (int32_t alt : game.agent(i).actions) {
        if (alt == result.allocation.choice[i]) continue;
        b.choice[i] = alt;
        const Rational u = utility(game, f, i, b);
        if (u <= current) continue;  // strict improvements only
        if (mover < 0 || u > best_gain) {  // ties: lowest resource index, i.e. first strict max
          mover = i;
          target = alt;
          best_gain = u;
        } else if (u == best_gain && alt < target) {
          target = alt;
        }
      }
    }
    if (mover < 0) return result;  // equilibrium reached
    if (step >= max_steps)
      throw InternalInconsistencyError("best-response dynamics exceeded max_steps");

    const int32_t from = result.allocation.choice[mover];
    result.allocation.choice[mover] = target;
    result.trace.push_back(
        BrdStep{mover, from, target, potential(game, f, result.allocation)});
  }
}

EfficiencyReport efficiency(const Game& game, const DistributionRule& f, uint64_t profile_cap,
                            const Rational& tol, int jobs, uint64_t collect_limit) {
  require_within_cap(game, profile_cap);
  const ScanResult scan = scan_profiles(game, f, tol, collect_limit, jobs);
  if (!scan.has_equilibrium)
    throw InternalInconsistencyError(
        "no equilibrium found; impossible for a congestion game, enumeration is broken");

  const ProfileSpace space(game);
  EfficiencyReport report;
  report.num_equilibria = scan.num_equilibria;
  report.equilibria_truncated = scan.truncated;
  report.equilibria.reserve(scan.equilibrium_indices.size());
  for (uint64_t idx : scan.equilibrium_indices) report.equilibria.push_back(space.allocation_at(idx));
  report.opt_allocation = space.allocation_at(scan.opt_index);
  report.w_opt = scan.opt_welfare;
  report.worst_equilibrium = space.allocation_at(scan.worst_eq_index);
  report.w_worst = scan.worst_eq_welfare;
  report.best_equilibrium = space.allocation_at(scan.best_eq_index);
  report.w_best = scan.best_eq_welfare;
  if (report.w_opt == 0) {
    // degenerate all-zero game: every profile is optimal
    report.poa = 1;
    report.pos = 1;
  } else {
    report.poa = report.w_worst / report.w_opt;
    report.pos = report.w_best / report.w_opt;
  }
  report.bound_poa = poa_bound(f);
  report.bound_pos = pos_bound(f);
  return report;
}

}  // namespace covergame
