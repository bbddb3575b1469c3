#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "moralsim/types.hpp"

namespace moralsim {

struct PlantParams {
  int initial_quantity = 4;
  int capacity = 3;
  int respawn_delay = 10;
  int nutrition = 3;
};

struct PreyParams {
  int initial_count = 4;
  double hp_mean = 5.0;
  double hp_std = 1.0;
  double physical_ability = 4.0;
  double respawn_rate = 0.1;
  int max_count = 6;
  double difficulty = 2.0;
};

struct LlmParams {
  std::string provider_url = "https://api.openai.com/v1";
  std::string model_id = "gpt-4.1-mini";
  int max_retries = 10;
  bool reflection_enabled = true;
  int timeout = 60;           // seconds per request
  double temperature = 1.0;   // optional key, provider default
};

struct SimulationConfig {
  int max_time_steps = 80;
  int social_rounds_per_step = 2;
  bool moral_type_visible = true;
  int initial_agent_count = 8;
  std::map<MoralType, double> type_distribution = {
      {MoralType::universal, 0.25},
      {MoralType::reciprocal, 0.25},
      {MoralType::kin, 0.25},
      {MoralType::selfish, 0.25},
  };
  int perception_window = 15;
  int initial_hp = 20;
  int max_hp = 40;
  int initial_age = 10;
  int max_age = 20;
  int min_hp_repro = 12;
  int hp_cost_repro = 10;
  int min_age_repro = 4;
  int offspring_hp = 3;
  double pa_mean = 6.0;
  double pa_std = 0.0;
  double pa_slope = 5.0;      // S in the success function
  double pa_intercept = 0.1;  // I in the success function
  PlantParams plant_params;
  PreyParams prey_params;
  double resource_abundance = 2.0;
  int metabolic_cost_per_step = 1;
  int collect_cap = 3;
  int message_max_length = 500;
  LlmParams llm;
  std::uint64_t rng_seed = 42;

  // Abundance-scaled population sizes (rounded to nearest, minimum 1).
  int scaled_plant_nodes() const;
  int scaled_initial_prey() const;
  int scaled_max_prey() const;

  // Nominal prey max HP before per-prey sampling noise; used by prompt templates.
  int nominal_prey_max_hp() const;
  // Prompt hint: smallest n with n*floor(pa_mean) >= nominal prey max HP, plus 1.
  int typical_agents_to_kill(int prey_max_hp) const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates the canonical JSON document. Unknown keys are rejected;
// every invariant violation names the field and constraint.
SimulationConfig load_config(const std::string& json_text);
SimulationConfig load_config_file(const std::string& path);
SimulationConfig config_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const SimulationConfig& cfg);
std::string serialize_config(const SimulationConfig& cfg);

// Named experiment overlays. `single_type:<T>` (also accepted as `single_type(<T>)`)
// sets the distribution to 100% of T.
SimulationConfig apply_variant(const SimulationConfig& base, const std::string& variant);

// Stable FNV-1a 64-bit hash of the canonical serialization, hex-encoded.
std::string config_hash(const SimulationConfig& cfg);

// Largest-remainder allocation of `total` agents across the distribution.
// Ties break in fixed type order (universal, reciprocal, kin, selfish).
std::map<MoralType, int> allocate_type_counts(const std::map<MoralType, double>& distribution,
                                              int total);

}  // namespace moralsim
