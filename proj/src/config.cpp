#include "moralsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace moralsim {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!required.count(it.key()) && !optional.count(it.key())) {
      throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
    }
  }
  for (const auto& k : required) {
    if (!obj.contains(k)) throw ConfigError(where + ": missing key \"" + k + "\"");
  }
}

int get_int(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
  return v.get<int>();
}

double get_num(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(key + ": expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(key + ": expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(key + ": expected a string");
  return v.get<std::string>();
}

void check_positive(int v, const std::string& field) {
  if (v < 1) throw ConfigError(field + ": must be >= 1, got " + std::to_string(v));
}

void check_non_negative(int v, const std::string& field) {
  if (v < 0) throw ConfigError(field + ": must be >= 0, got " + std::to_string(v));
}

int scaled_count(int base, double abundance) {
  return std::max(1, static_cast<int>(std::llround(base * abundance)));
}

}  // namespace

int SimulationConfig::scaled_plant_nodes() const {
  return scaled_count(kBasePlantNodes, resource_abundance);
}

int SimulationConfig::scaled_initial_prey() const {
  return scaled_count(prey_params.initial_count, resource_abundance);
}

int SimulationConfig::scaled_max_prey() const {
  return scaled_count(prey_params.max_count, resource_abundance);
}

int SimulationConfig::nominal_prey_max_hp() const {
  return std::max(1, static_cast<int>(std::llround(prey_params.hp_mean * prey_params.difficulty)));
}

int SimulationConfig::typical_agents_to_kill(int prey_max_hp) const {
  const int damage = std::max(1, static_cast<int>(std::floor(pa_mean)));
  int n = 1;
  while (n * damage < prey_max_hp) ++n;
  return n + 1;
}

SimulationConfig config_from_json(const json& doc) {
  require_keys(doc, "config",
               {"max_time_steps", "social_rounds_per_step", "moral_type_visible",
                "initial_agent_count", "type_distribution", "perception_window", "initial_hp",
                "max_hp", "initial_age", "max_age", "min_hp_repro", "hp_cost_repro",
                "min_age_repro", "offspring_hp", "pa_mean", "pa_std", "pa_slope", "pa_intercept",
                "plant_params", "prey_params", "resource_abundance", "metabolic_cost_per_step",
                "collect_cap", "message_max_length", "llm", "rng_seed"});

  SimulationConfig cfg;
  cfg.max_time_steps = get_int(doc, "max_time_steps");
  cfg.social_rounds_per_step = get_int(doc, "social_rounds_per_step");
  cfg.moral_type_visible = get_bool(doc, "moral_type_visible");
  cfg.initial_agent_count = get_int(doc, "initial_agent_count");
  cfg.perception_window = get_int(doc, "perception_window");
  cfg.initial_hp = get_int(doc, "initial_hp");
  cfg.max_hp = get_int(doc, "max_hp");
  cfg.initial_age = get_int(doc, "initial_age");
  cfg.max_age = get_int(doc, "max_age");
  cfg.min_hp_repro = get_int(doc, "min_hp_repro");
  cfg.hp_cost_repro = get_int(doc, "hp_cost_repro");
  cfg.min_age_repro = get_int(doc, "min_age_repro");
  cfg.offspring_hp = get_int(doc, "offspring_hp");
  cfg.pa_mean = get_num(doc, "pa_mean");
  cfg.pa_std = get_num(doc, "pa_std");
  cfg.pa_slope = get_num(doc, "pa_slope");
  cfg.pa_intercept = get_num(doc, "pa_intercept");
  cfg.resource_abundance = get_num(doc, "resource_abundance");
  cfg.metabolic_cost_per_step = get_int(doc, "metabolic_cost_per_step");
  cfg.collect_cap = get_int(doc, "collect_cap");
  cfg.message_max_length = get_int(doc, "message_max_length");
  {
    const auto& v = doc.at("rng_seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError("rng_seed: expected an integer");
    cfg.rng_seed = v.get<std::uint64_t>();
  }

  const auto& dist = doc.at("type_distribution");
  if (!dist.is_object()) throw ConfigError("type_distribution: expected an object");
  cfg.type_distribution.clear();
  for (MoralType t : kAllMoralTypes) cfg.type_distribution[t] = 0.0;
  for (auto it = dist.begin(); it != dist.end(); ++it) {
    MoralType t;
    try {
      t = moral_type_from_string(it.key());
    } catch (const ValidationError&) {
      throw ConfigError("type_distribution: unknown key \"" + it.key() + "\"");
    }
    if (!it.value().is_number()) throw ConfigError("type_distribution: fractions must be numbers");
    cfg.type_distribution[t] = it.value().get<double>();
  }

  const auto& pp = doc.at("plant_params");
  require_keys(pp, "plant_params", {"initial_quantity", "capacity", "respawn_delay", "nutrition"});
  cfg.plant_params.initial_quantity = get_int(pp, "initial_quantity");
  cfg.plant_params.capacity = get_int(pp, "capacity");
  cfg.plant_params.respawn_delay = get_int(pp, "respawn_delay");
  cfg.plant_params.nutrition = get_int(pp, "nutrition");

  const auto& ap = doc.at("prey_params");
  require_keys(ap, "prey_params",
               {"initial_count", "hp_mean", "hp_std", "physical_ability", "respawn_rate",
                "max_count", "difficulty"});
  cfg.prey_params.initial_count = get_int(ap, "initial_count");
  cfg.prey_params.hp_mean = get_num(ap, "hp_mean");
  cfg.prey_params.hp_std = get_num(ap, "hp_std");
  cfg.prey_params.physical_ability = get_num(ap, "physical_ability");
  cfg.prey_params.respawn_rate = get_num(ap, "respawn_rate");
  cfg.prey_params.max_count = get_int(ap, "max_count");
  cfg.prey_params.difficulty = get_num(ap, "difficulty");

  const auto& lp = doc.at("llm");
  require_keys(lp, "llm", {"provider_url", "model_id", "max_retries", "reflection_enabled",
                           "timeout"},
               {"temperature"});
  cfg.llm.provider_url = get_str(lp, "provider_url");
  cfg.llm.model_id = get_str(lp, "model_id");
  cfg.llm.max_retries = get_int(lp, "max_retries");
  cfg.llm.reflection_enabled = get_bool(lp, "reflection_enabled");
  cfg.llm.timeout = get_int(lp, "timeout");
  if (lp.contains("temperature")) cfg.llm.temperature = get_num(lp, "temperature");

  // Invariants
  check_positive(cfg.max_time_steps, "max_time_steps");
  if (cfg.social_rounds_per_step < 1)
    throw ConfigError("social_rounds_per_step: must be >= 1, got " +
                      std::to_string(cfg.social_rounds_per_step));
  check_positive(cfg.initial_agent_count, "initial_agent_count");
  check_positive(cfg.perception_window, "perception_window");
  check_non_negative(cfg.initial_hp, "initial_hp");
  check_non_negative(cfg.max_hp, "max_hp");
  check_non_negative(cfg.initial_age, "initial_age");
  check_non_negative(cfg.max_age, "max_age");
  if (cfg.min_hp_repro < 1)
    throw ConfigError("min_hp_repro: must be >= 1, got " + std::to_string(cfg.min_hp_repro));
  check_non_negative(cfg.hp_cost_repro, "hp_cost_repro");
  check_non_negative(cfg.min_age_repro, "min_age_repro");
  check_non_negative(cfg.offspring_hp, "offspring_hp");
  if (cfg.initial_hp > cfg.max_hp)
    throw ConfigError("initial_hp: must be <= max_hp (" + std::to_string(cfg.initial_hp) + " > " +
                      std::to_string(cfg.max_hp) + ")");
  if (cfg.initial_age > cfg.max_age)
    throw ConfigError("initial_age: must be <= max_age (" + std::to_string(cfg.initial_age) +
                      " > " + std::to_string(cfg.max_age) + ")");
  if (cfg.pa_slope == 0.0) throw ConfigError("pa_slope: must be nonzero");

  double sum = 0.0;
  for (const auto& [t, f] : cfg.type_distribution) {
    if (f < 0.0 || f > 1.0)
      throw ConfigError("type_distribution[" + to_string(t) + "]: fraction must be in [0,1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "type_distribution: distribution sums to " << sum << ", expected 1";
    throw ConfigError(os.str());
  }

  check_non_negative(cfg.plant_params.initial_quantity, "plant_params.initial_quantity");
  check_positive(cfg.plant_params.capacity, "plant_params.capacity");
  check_positive(cfg.plant_params.respawn_delay, "plant_params.respawn_delay");
  check_positive(cfg.plant_params.nutrition, "plant_params.nutrition");
  check_positive(cfg.prey_params.initial_count, "prey_params.initial_count");
  if (cfg.prey_params.respawn_rate < 0.0 || cfg.prey_params.respawn_rate > 1.0)
    throw ConfigError("prey_params.respawn_rate: must be in [0,1], got " +
                      std::to_string(cfg.prey_params.respawn_rate));
  check_positive(cfg.prey_params.max_count, "prey_params.max_count");
  if (cfg.prey_params.difficulty <= 0.0)
    throw ConfigError("prey_params.difficulty: must be > 0");
  if (cfg.resource_abundance <= 0.0)
    throw ConfigError("resource_abundance: must be > 0");
  check_non_negative(cfg.metabolic_cost_per_step, "metabolic_cost_per_step");
  check_positive(cfg.collect_cap, "collect_cap");
  check_positive(cfg.message_max_length, "message_max_length");
  check_positive(cfg.llm.max_retries, "llm.max_retries");
  check_positive(cfg.llm.timeout, "llm.timeout");

  return cfg;
}

SimulationConfig load_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(doc);
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

json config_to_json(const SimulationConfig& cfg) {
  json dist = json::object();
  for (const auto& [t, f] : cfg.type_distribution) dist[to_string(t)] = f;
  return json{
      {"max_time_steps", cfg.max_time_steps},
      {"social_rounds_per_step", cfg.social_rounds_per_step},
      {"moral_type_visible", cfg.moral_type_visible},
      {"initial_agent_count", cfg.initial_agent_count},
      {"type_distribution", dist},
      {"perception_window", cfg.perception_window},
      {"initial_hp", cfg.initial_hp},
      {"max_hp", cfg.max_hp},
      {"initial_age", cfg.initial_age},
      {"max_age", cfg.max_age},
      {"min_hp_repro", cfg.min_hp_repro},
      {"hp_cost_repro", cfg.hp_cost_repro},
      {"min_age_repro", cfg.min_age_repro},
      {"offspring_hp", cfg.offspring_hp},
      {"pa_mean", cfg.pa_mean},
      {"pa_std", cfg.pa_std},
      {"pa_slope", cfg.pa_slope},
      {"pa_intercept", cfg.pa_intercept},
      {"plant_params",
       {{"initial_quantity", cfg.plant_params.initial_quantity},
        {"capacity", cfg.plant_params.capacity},
        {"respawn_delay", cfg.plant_params.respawn_delay},
        {"nutrition", cfg.plant_params.nutrition}}},
      {"prey_params",
       {{"initial_count", cfg.prey_params.initial_count},
        {"hp_mean", cfg.prey_params.hp_mean},
        {"hp_std", cfg.prey_params.hp_std},
        {"physical_ability", cfg.prey_params.physical_ability},
        {"respawn_rate", cfg.prey_params.respawn_rate},
        {"max_count", cfg.prey_params.max_count},
        {"difficulty", cfg.prey_params.difficulty}}},
      {"resource_abundance", cfg.resource_abundance},
      {"metabolic_cost_per_step", cfg.metabolic_cost_per_step},
      {"collect_cap", cfg.collect_cap},
      {"message_max_length", cfg.message_max_length},
      {"llm",
       {{"provider_url", cfg.llm.provider_url},
        {"model_id", cfg.llm.model_id},
        {"max_retries", cfg.llm.max_retries},
        {"reflection_enabled", cfg.llm.reflection_enabled},
        {"timeout", cfg.llm.timeout},
        {"temperature", cfg.llm.temperature}}},
      {"rng_seed", cfg.rng_seed},
  };
}

std::string serialize_config(const SimulationConfig& cfg) { return config_to_json(cfg).dump(2); }

SimulationConfig apply_variant(const SimulationConfig& base, const std::string& variant) {
  SimulationConfig cfg = base;
  if (variant == "baseline") return cfg;
  if (variant == "scarce_resource") {
    cfg.resource_abundance = 1.0;
    return cfg;
  }
  if (variant == "high_social_cost") {
    cfg.social_rounds_per_step = 1;
    return cfg;
  }
  if (variant == "moral_invisible") {
    cfg.moral_type_visible = false;
    return cfg;
  }
  std::string type_name;
  if (variant.rfind("single_type:", 0) == 0) {
    type_name = variant.substr(12);
  } else if (variant.rfind("single_type(", 0) == 0 && variant.back() == ')') {
    type_name = variant.substr(12, variant.size() - 13);
  }
  if (!type_name.empty()) {
    MoralType t;
    try {
      t = moral_type_from_string(type_name);
    } catch (const ValidationError&) {
      throw ConfigError("unknown variant: " + variant);
    }
    for (MoralType each : kAllMoralTypes) cfg.type_distribution[each] = (each == t) ? 1.0 : 0.0;
    return cfg;
  }
  throw ConfigError("unknown variant: " + variant);
}

std::string config_hash(const SimulationConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::map<MoralType, int> allocate_type_counts(const std::map<MoralType, double>& distribution,
                                              int total) {
  struct Slot {
    MoralType type;
    int base;
    double remainder;
    int order;
  };
  std::vector<Slot> slots;
  int order = 0;
  int assigned = 0;
  for (MoralType t : kAllMoralTypes) {
    const auto it = distribution.find(t);
    const double f = (it == distribution.end()) ? 0.0 : it->second;
    const double exact = f * total;
    const int base = static_cast<int>(std::floor(exact));
    slots.push_back({t, base, exact - base, order++});
    assigned += base;
  }
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return a.order < b.order;
  });
  int leftover = total - assigned;
  for (auto& s : slots) {
    if (leftover <= 0) break;
    ++s.base;
    --leftover;
  }
  std::map<MoralType, int> counts;
  for (const auto& s : slots) counts[s.type] = s.base;
  return counts;
}

}  // namespace moralsim
