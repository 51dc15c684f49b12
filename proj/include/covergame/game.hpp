#ifndef COVERGAME_GAME_HPP
#define COVERGAME_GAME_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "covergame/rational.hpp"

namespace covergame {

class DistributionRule;

struct Resource {
  std::string id;
  Rational value;  // >= 0
};

struct Agent {
  std::string id;
  std::vector<int32_t> actions;  // resource indices, declaration order
  bool allow_null = false;
};

constexpr int32_t kNullChoice = -1;

/// One choice (resource index or kNullChoice) per agent.
struct Allocation {
  std::vector<int32_t> choice;

  bool operator==(const Allocation&) const = default;
};

/// Raw, unresolved game description mirroring the game file schema.
struct GameDocument {
  struct AgentSpec {
    std::string id;
    std::vector<std::string> actions;
    bool allow_null = false;
  };
  int k = 1;
  std::vector<std::pair<std::string, Rational>> resources;
  std::vector<AgentSpec> agents;
};

struct ValidationReport {
  int cardinality = 0;
  int k = 0;
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

/// A covering game: valued resources, per-agent action sets and the
/// cardinality bound k. Immutable after construction and safe to share
/// across threads.
class Game {
 public:
  Game(std::vector<Resource> resources, std::vector<Agent> agents, int k);

  /// Resolves ids and rejects invalid documents (see validate).
  static Game from_document(const GameDocument& doc);
  GameDocument to_document() const;

  int num_agents() const { return static_cast<int>(agents_.size()); }
  int num_resources() const { return static_cast<int>(resources_.size()); }
  int k() const { return k_; }
  const Resource& resource(int32_t r) const { return resources_[r]; }
  const Agent& agent(int i) const { return agents_[i]; }
  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<Agent>& agents() const { return agents_; }

  int32_t resource_index(const std::string& id) const;  // -1 if unknown
  int32_t agent_index(const std::string& id) const;     // -1 if unknown

  /// max over resources of how many agents may select it.
  int cardinality() const;

  bool agent_has_action(int i, int32_t r) const;
  bool is_valid_allocation(const Allocation& a) const;

 private:
  std::vector<Resource> resources_;
  std::vector<Agent> agents_;
  int k_;
  std::unordered_map<std::string, int32_t> resource_index_;
  std::unordered_map<std::string, int32_t> agent_index_;
};

/// Checks a raw document: unknown/duplicate ids, empty or duplicate action
/// sets, negative values, cardinality above k. Problems are returned, not
/// thrown.
ValidationReport validate(const GameDocument& doc);
ValidationReport validate(const Game& game);

/// Number of agents choosing resource r; null choices never count.
int coverage_count(const Game& game, const Allocation& a, int32_t r);

/// Sum of values over resources covered by at least one agent.
Rational welfare(const Game& game, const Allocation& a);

/// v_{a_i} * f(|a|_{a_i}), zero for a null choice.
Rational utility(const Game& game, const DistributionRule& f, int agent, const Allocation& a);

}  // namespace covergame

#endif
