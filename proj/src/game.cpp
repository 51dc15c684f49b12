#include "covergame/game.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "covergame/errors.hpp"
#include "covergame/rules.hpp"

namespace covergame {

Game::Game(std::vector<Resource> resources, std::vector<Agent> agents, int k)
    : resources_(std::move(resources)), agents_(std::move(agents)), k_(k) {
  if (k_ < 1) throw std::invalid_argument("cardinality bound k must be positive");
  for (int32_t r = 0; r < static_cast<int32_t>(resources_.size()); ++r) {
    if (resources_[r].value < 0) throw std::invalid_argument("negative resource value");
    if (!resource_index_.emplace(resources_[r].id, r).second)
      throw std::invalid_argument("duplicate resource id: " + resources_[r].id);
  }
  for (int32_t i = 0; i < static_cast<int32_t>(agents_.size()); ++i) {
    const Agent& ag = agents_[i];
    // the null action can stand alone only where it is explicitly allowed
    if (ag.actions.empty() && !ag.allow_null)
      throw std::invalid_argument("agent has empty action set: " + ag.id);
    std::set<int32_t> seen;
    for (int32_t r : ag.actions) {
      if (r < 0 || r >= num_resources())
        throw std::invalid_argument("action out of range for agent " + ag.id);
      if (!seen.insert(r).second)
        throw std::invalid_argument("duplicate action for agent " + ag.id);
    }
    if (!agent_index_.emplace(ag.id, i).second)
      throw std::invalid_argument("duplicate agent id: " + ag.id);
  }
  if (cardinality() > k_)
    throw std::invalid_argument("game cardinality exceeds k");
}

Game Game::from_document(const GameDocument& doc) {
  ValidationReport report = validate(doc);
  if (!report.valid()) {
    std::string msg = "invalid game document:";
    for (const auto& v : report.violations) msg += "\n  - " + v;
    throw ParseError(msg);
  }
  std::vector<Resource> resources;
  std::unordered_map<std::string, int32_t> index;
  for (const auto& [id, value] : doc.resources) {
    index.emplace(id, static_cast<int32_t>(resources.size()));
    resources.push_back(Resource{id, value});
  }
  std::vector<Agent> agents;
  for (const auto& spec : doc.agents) {
    Agent ag;
    ag.id = spec.id;
    ag.allow_null = spec.allow_null;
    for (const auto& action : spec.actions) ag.actions.push_back(index.at(action));
    agents.push_back(std::move(ag));
  }
  return Game(std::move(resources), std::move(agents), doc.k);
}

GameDocument Game::to_document() const {
  GameDocument doc;
  doc.k = k_;
  for (const auto& r : resources_) doc.resources.emplace_back(r.id, r.value);
  for (const auto& ag : agents_) {
    GameDocument::AgentSpec spec;
    spec.id = ag.id;
    spec.allow_null = ag.allow_null;
    for (int32_t r : ag.actions) spec.actions.push_back(resources_[r].id);
    doc.agents.push_back(std::move(spec));
  }
  return doc;
}

int32_t Game::resource_index(const std::string& id) const {
  auto it = resource_index_.find(id);
  return it == resource_index_.end() ? -1 : it->second;
}

int32_t Game::agent_index(const std::string& id) const {
  auto it = agent_index_.find(id);
  return it == agent_index_.end() ? -1 : it->second;
}

int Game::cardinality() const {
  std::vector<int> holders(resources_.size(), 0);
  for (const auto& ag : agents_)
    for (int32_t r : ag.actions) ++holders[r];
  int out = 0;
  for (int h : holders) out = std::max(out, h);
  return out;
}

bool Game::agent_has_action(int i, int32_t r) const {
  const auto& acts = agents_[i].actions;
  return std::find(acts.begin(), acts.end(), r) != acts.end();
}

bool Game::is_valid_allocation(const Allocation& a) const {
  if (static_cast<int>(a.choice.size()) != num_agents()) return false;
  for (int i = 0; i < num_agents(); ++i) {
    const int32_t c = a.choice[i];
    if (c == kNullChoice) {
      if (!agents_[i].allow_null) return false;
    } else if (c < 0 || c >= num_resources() || !agent_has_action(i, c)) {
      return false;
    }
  }
  return true;
}

ValidationReport validate(const GameDocument& doc) {
  ValidationReport report;
  report.k = doc.k;
  if (doc.k < 1) report.violations.push_back("k must be a positive integer");

  std::unordered_map<std::string, int> holders;
  std::set<std::string> resource_ids;
  for (const auto& [id, value] : doc.resources) {
    if (!resource_ids.insert(id).second)
      report.violations.push_back("duplicate resource id: " + id);
    if (value < 0) report.violations.push_back("negative value for resource " + id);
  }
  std::set<std::string> agent_ids;
  for (const auto& spec : doc.agents) {
    if (!agent_ids.insert(spec.id).second)
      report.violations.push_back("duplicate agent id: " + spec.id);
    if (spec.actions.empty() && !spec.allow_null)
      report.violations.push_back("agent " + spec.id + " has an empty action set");
    std::set<std::string> seen;
    for (const auto& action : spec.actions) {
      if (!resource_ids.count(action))
        report.violations.push_back("agent " + spec.id + " references unknown resource " + action);
      else if (!seen.insert(action).second)
        report.violations.push_back("agent " + spec.id + " lists resource " + action + " twice");
      else
        ++holders[action];
    }
  }
  for (const auto& [id, count] : holders) report.cardinality = std::max(report.cardinality, count);
  if (doc.k >= 1 && report.cardinality > doc.k)
    report.violations.push_back("cardinality " + std::to_string(report.cardinality) +
                                " > k=" + std::to_string(doc.k));
  return report;
}

ValidationReport validate(const Game& game) { return validate(game.to_document()); }

int coverage_count(const Game& game, const Allocation& a, int32_t r) {
  if (r < 0 || r >= game.num_resources()) throw std::out_of_range("unknown resource");
  int count = 0;
  for (int32_t c : a.choice) count += c == r;
  return count;
}

Rational welfare(const Game& game, const Allocation& a) {
  std::vector<char> covered(game.num_resources(), 0);
  for (int32_t c : a.choice)
    if (c != kNullChoice) covered[c] = 1;
  Rational out = 0;
  for (int32_t r = 0; r < game.num_resources(); ++r)
    if (covered[r]) out += game.resource(r).value;
  return out;
}

Rational utility(const Game& game, const DistributionRule& f, int agent, const Allocation& a) {
  const int32_t r = a.choice[agent];
  if (r == kNullChoice) return Rational(0);
  const int count = coverage_count(game, a, r);
  if (count > f.k())
    throw std::domain_error("rule undefined at coverage " + std::to_string(count) +
                            " (rule k=" + std::to_string(f.k()) + ")");
  return game.resource(r).value * f(count);
}

}  // namespace covergame
