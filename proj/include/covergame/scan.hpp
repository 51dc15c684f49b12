#ifndef COVERGAME_SCAN_HPP
#define COVERGAME_SCAN_HPP

#include <cstdint>
#include <vector>

#include "covergame/game.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"

namespace covergame {

/// Mixed-radix index over the joint action space. Agent 0 is the most
/// significant digit and, within an agent, actions keep their declaration
/// order with the null action last; profile index order therefore *is* the
/// declaration-order lexicographic order every tie-break refers to.
class ProfileSpace {
 public:
  explicit ProfileSpace(const Game& game);

  uint64_t count() const { return total_; }
  bool overflowed() const { return overflow_; }
  const std::vector<std::vector<int32_t>>& actions() const { return actions_; }

  void decode(uint64_t index, int32_t* digits) const;
  Allocation allocation_at(uint64_t index) const;
  uint64_t index_of(const Allocation& a) const;

 private:
  std::vector<std::vector<int32_t>> actions_;
  uint64_t total_ = 1;
  bool overflow_ = false;
};

/// Everything a full profile scan reports. Welfare values are exact; the
/// extremal indices use the lexicographic profile order, first hit wins.
struct ScanResult {
  uint64_t profiles = 0;
  uint64_t num_equilibria = 0;
  uint64_t opt_index = 0;
  Rational opt_welfare;
  bool has_equilibrium = false;
  uint64_t worst_eq_index = 0;
  Rational worst_eq_welfare;
  uint64_t best_eq_index = 0;
  Rational best_eq_welfare;
  std::vector<uint64_t> equilibrium_indices;  // first collect_limit, in order
  bool truncated = false;
};

/// Serial reference scan: decodes every profile from scratch and works in
/// exact rational arithmetic. Slow, obviously correct; kept as the oracle
/// the optimized kernels are tested against.
ScanResult scan_profiles_reference(const Game& game, const DistributionRule& f,
                                   const Rational& tol, uint64_t collect_limit);

/// Production scan: odometer walk with incremental coverage counts,
/// OpenMP-parallel over contiguous index blocks merged in index order, so
/// the result is identical for any worker count. Utilities are compared in
/// exact integer fixed point when the game's values and the rule scale into
/// int64, otherwise in rationals.
ScanResult scan_profiles(const Game& game, const DistributionRule& f, const Rational& tol,
                         uint64_t collect_limit, int jobs);

/// True when scan_profiles would take the int64 fixed-point path.
bool integer_kernel_applicable(const Game& game, const DistributionRule& f, const Rational& tol);

}  // namespace covergame

#endif
