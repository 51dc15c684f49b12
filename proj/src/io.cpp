#include "covergame/io.hpp"

#include <fstream>
#include <limits>

#include "covergame/errors.hpp"

namespace covergame {

namespace {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("cannot parse " + path + ": " + e.what());
  }
  return json;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

/// integers as numbers, everything else "p/q"
Json rational_to_value_json(const Rational& value) {
  if (denominator(value) == 1 && numerator(value) >= std::numeric_limits<int64_t>::min() &&
      numerator(value) <= std::numeric_limits<int64_t>::max())
    return Json(numerator(value).convert_to<int64_t>());
  return Json(to_fraction_string(value));
}

}  // namespace

Json rational_to_json(const Rational& value) {
  Json out;
  out["exact"] = to_fraction_string(value);
  out["value"] = to_double(value);
  return out;
}

Rational rational_from_json(const Json& value) {
  try {
    if (value.is_number_integer()) return Rational(value.get<int64_t>());
    if (value.is_number_unsigned()) return Rational(BigInt(value.get<uint64_t>()));
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad numeric value: ") + e.what());
  }
  throw ParseError("expected a number or a rational string, got " + value.dump());
}

GameDocument game_document_from_json(const Json& json) {
  try {
    GameDocument doc;
    doc.k = json.at("k").get<int>();
    for (const auto& r : json.at("resources"))
      doc.resources.emplace_back(r.at("id").get<std::string>(),
                                 rational_from_json(r.at("value")));
    for (const auto& a : json.at("agents")) {
      GameDocument::AgentSpec spec;
      spec.id = a.at("id").get<std::string>();
      for (const auto& action : a.at("actions")) spec.actions.push_back(action.get<std::string>());
      spec.allow_null = a.value("allow_null", false);
      doc.agents.push_back(std::move(spec));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed game document: ") + e.what());
  }
}

Json game_to_json(const Game& game) {
  Json out;
  out["k"] = game.k();
  out["resources"] = Json::array();
  for (const auto& r : game.resources())
    out["resources"].push_back(Json{{"id", r.id}, {"value", rational_to_value_json(r.value)}});
  out["agents"] = Json::array();
  for (const auto& a : game.agents()) {
    Json actions = Json::array();
    for (int32_t r : a.actions) actions.push_back(game.resource(r).id);
    out["agents"].push_back(
        Json{{"id", a.id}, {"actions", std::move(actions)}, {"allow_null", a.allow_null}});
  }
  return out;
}

Game load_game(const std::string& path) {
  return Game::from_document(game_document_from_json(load_json_file(path)));
}

void save_game(const Game& game, const std::string& path) {
  write_text_file(path, game_to_json(game).dump(2) + "\n");
}

DistributionRule rule_from_json(const Json& json) {
  try {
    const int k = json.at("k").get<int>();
    std::vector<Rational> values;
    for (const auto& v : json.at("f")) values.push_back(rational_from_json(v));
    if (static_cast<int>(values.size()) != k)
      throw ParseError("rule lists " + std::to_string(values.size()) + " shares but k=" +
                       std::to_string(k));
    return DistributionRule(std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed rule document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid rule: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("invalid rule: ") + e.what());
  }
}

Json rule_to_json(const DistributionRule& rule) {
  Json out;
  out["k"] = rule.k();
  out["f"] = Json::array();
  for (const auto& v : rule.values()) out["f"].push_back(rational_to_value_json(v));
  return out;
}

DistributionRule load_rule(const std::string& path) {
  return rule_from_json(load_json_file(path));
}

Allocation allocation_from_json(const Game& game, const Json& json) {
  try {
    const auto& choice = json.at("choice");
    Allocation a;
    a.choice.assign(game.num_agents(), kNullChoice);
    std::vector<char> seen(game.num_agents(), 0);
    for (const auto& [agent_id, value] : choice.items()) {
      const int32_t i = game.agent_index(agent_id);
      if (i < 0) throw ParseError("allocation names unknown agent " + agent_id);
      seen[i] = 1;
      if (value.is_null()) continue;
      const int32_t r = game.resource_index(value.get<std::string>());
      if (r < 0)
        throw ParseError("allocation names unknown resource " + value.get<std::string>());
      a.choice[i] = r;
    }
    for (int i = 0; i < game.num_agents(); ++i)
      if (!seen[i]) throw ParseError("allocation misses agent " + game.agent(i).id);
    if (!game.is_valid_allocation(a))
      throw ParseError("allocation assigns an action outside an agent's set");
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed allocation: ") + e.what());
  }
}

Json allocation_to_json(const Game& game, const Allocation& a) {
  Json choice;
  for (int i = 0; i < game.num_agents(); ++i) {
    if (a.choice[i] == kNullChoice)
      choice[game.agent(i).id] = nullptr;
    else
      choice[game.agent(i).id] = game.resource(a.choice[i]).id;
  }
  return Json{{"choice", std::move(choice)}};
}

Allocation load_allocation(const Game& game, const std::string& path) {
  return allocation_from_json(game, load_json_file(path));
}

Json validation_to_json(const ValidationReport& report) {
  Json out;
  out["cardinality"] = report.cardinality;
  out["k"] = report.k;
  out["valid"] = report.valid();
  out["violations"] = report.violations;
  return out;
}

Json report_to_json(const Game& game, const EfficiencyReport& report) {
  Json out;
  out["num_equilibria"] = report.num_equilibria;
  out["w_opt"] = rational_to_json(report.w_opt);
  out["opt_allocation"] = allocation_to_json(game, report.opt_allocation);
  out["poa"] = rational_to_json(report.poa);
  out["pos"] = rational_to_json(report.pos);
  out["bound_poa"] = rational_to_json(report.bound_poa);
  out["bound_pos"] = rational_to_json(report.bound_pos);
  out["worst_equilibrium"] = allocation_to_json(game, report.worst_equilibrium);
  out["w_worst"] = rational_to_json(report.w_worst);
  out["best_equilibrium"] = allocation_to_json(game, report.best_equilibrium);
  out["w_best"] = rational_to_json(report.w_best);
  out["equilibria_truncated"] = report.equilibria_truncated;
  out["equilibria"] = Json::array();
  for (const auto& eq : report.equilibria) out["equilibria"].push_back(allocation_to_json(game, eq));
  return out;
}

Json state_stats_to_json(const Game& game, const std::vector<AgentStateStats>& stats) {
  Json agents = Json::array();
  for (size_t i = 0; i < stats.size(); ++i) {
    Json entry;
    entry["agent"] = game.agent(static_cast<int>(i)).id;
    entry["reach"] = Json::array();
    for (int j : stats[i].reach) entry["reach"].push_back(game.agent(j).id);
    entry["enlarged_set"] = Json::array();
    for (int32_t r : stats[i].enlarged) entry["enlarged_set"].push_back(game.resource(r).id);
    entry["v"] = rational_to_json(stats[i].v_value);
    entry["x"] = rational_to_json(stats[i].x_value);
    entry["toggle"] =
        stats[i].toggle == RuleToggle::kMarginalContribution ? "mc" : "gairing";
    agents.push_back(std::move(entry));
  }
  return Json{{"agents", std::move(agents)}};
}

Json provenance_to_json(const Game& game, const InstanceProvenance& provenance) {
  Json out;
  out["family"] = provenance.family;
  Json params;
  for (const auto& [key, value] : provenance.parameters) params[key] = value;
  out["parameters"] = std::move(params);
  if (provenance.claimed_equilibrium)
    out["claimed_equilibrium"] = allocation_to_json(game, *provenance.claimed_equilibrium);
  if (provenance.claimed_ne_welfare)
    out["claimed_ne_welfare"] = rational_to_json(*provenance.claimed_ne_welfare);
  if (provenance.claimed_opt_welfare)
    out["claimed_opt_welfare"] = rational_to_json(*provenance.claimed_opt_welfare);
  return out;
}

std::string frontier_csv(int k, int samples) {
  if (samples < 2) throw std::domain_error("frontier sweep needs at least 2 samples");
  const Rational alpha_max = optimal_poa(k);
  std::string out = "alpha,z";
  for (int j = 1; j <= k; ++j) out += ",f" + std::to_string(j);
  out += "\n";
  for (int i = 1; i <= samples; ++i) {
    const Rational alpha = alpha_max * i / samples;
    const FrontierPoint point = frontier_point(alpha, k);
    out += to_decimal_string(point.alpha, 12);
    out += "," + to_decimal_string(point.z, 12);
    for (int j = 1; j <= k; ++j) out += "," + to_decimal_string(point.rule(j), 12);
    out += "\n";
  }
  return out;
}

}  // namespace covergame
