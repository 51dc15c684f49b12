#ifndef COVERGAME_INSTANCES_HPP
#define COVERGAME_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covergame/game.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"

namespace covergame {

/// Counter-based generator (splitmix64): identical streams on every
/// platform, so seeded sweeps are reproducible bit for bit.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// uniform in [0, bound)
  uint64_t below(uint64_t bound) { return next() % bound; }
};

struct InstanceProvenance {
  std::string family;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<Allocation> claimed_equilibrium;
  std::optional<Rational> claimed_ne_welfare;
  std::optional<Rational> claimed_opt_welfare;
};

struct GeneratedInstance {
  Game game;
  InstanceProvenance provenance;
};

/// Geometric multi-level worst case for a rule with f(j) > f(j+1):
/// j agents per level, a shared resource per level valued gamma^level
/// (gamma = f(j+1)/f(j)) plus privates valued gamma^level * f(j), each
/// level linked to the previous through one agent. All-on-shared is a
/// tie-exact equilibrium; the generator verifies that and both welfare
/// identities W(ne) = (1-gamma^{m+1})/(1-gamma) and
/// W(opt) = W(ne)(1+(j-1)f(j)) + f(j)(1-gamma^m) before returning.
GeneratedInstance level_instance(const DistributionRule& f, int j, int m);

/// Flat worst case covering f(j) = f(j+1) and j = k: one shared resource
/// valued 1, privates valued f(j) (agent 1's private valued 0 to reach the
/// j+1 resource count without changing any welfare). All-on-shared is an
/// equilibrium with welfare 1 against an optimum of 1 + (j-1) f(j).
GeneratedInstance simple_tight_instance(const DistributionRule& f, int j);

/// Stability worst case: r_0 valued 1 against j privates valued f(j)-eps;
/// all-on-r_0 is the unique equilibrium (verified by enumeration) and the
/// optimum is 1 + (j-1)(f(j)-eps).
GeneratedInstance pos_family_instance(const DistributionRule& f, int j, const Rational& eps);

enum class ValueLaw { kUniform01, kInteger1to10 };

/// Seed-deterministic random game with cardinality at most k by
/// construction. Uniform values are 30-bit dyadics so downstream integer
/// kernels stay exact.
Game random_instance(uint64_t seed, int n, int num_resources, int k, ValueLaw law);

}  // namespace covergame

#endif
