#ifndef COVERGAME_IO_HPP
#define COVERGAME_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "covergame/equilibrium.hpp"
#include "covergame/game.hpp"
#include "covergame/instances.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"
#include "covergame/state_based.hpp"

namespace covergame {

using Json = nlohmann::ordered_json;

/// {"exact": "7/11", "value": 0.636...}: the exact string is authoritative,
/// the double is for plotting.
Json rational_to_json(const Rational& value);

/// Exact value from a JSON number or string: integers stay integers,
/// floats are read as exact decimal fractions, strings accept "p/q" and
/// decimals. Throws ParseError on anything else.
Rational rational_from_json(const Json& value);

GameDocument game_document_from_json(const Json& json);
Json game_to_json(const Game& game);
Game load_game(const std::string& path);
void save_game(const Game& game, const std::string& path);

DistributionRule rule_from_json(const Json& json);
Json rule_to_json(const DistributionRule& rule);
DistributionRule load_rule(const std::string& path);

Allocation allocation_from_json(const Game& game, const Json& json);
Json allocation_to_json(const Game& game, const Allocation& a);
Allocation load_allocation(const Game& game, const std::string& path);

Json validation_to_json(const ValidationReport& report);
Json report_to_json(const Game& game, const EfficiencyReport& report);
Json state_stats_to_json(const Game& game, const std::vector<AgentStateStats>& stats);
Json provenance_to_json(const Game& game, const InstanceProvenance& provenance);

/// "alpha,z,f1,...,fk" rows, alpha = optimal_poa(k) * i / samples for
/// i = 1..samples, every cell an exact 12-significant-digit decimal.
std::string frontier_csv(int k, int samples);

}  // namespace covergame

#endif
