#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moralsim/config.hpp"
#include "moralsim/rng.hpp"
#include "moralsim/types.hpp"

namespace moralsim {

struct AgentState {
  std::string agent_id;
  MoralType moral_type = MoralType::universal;
  int hp = 0;
  int max_hp = 0;
  int age = 0;
  double physical_ability = 0.0;
  std::optional<std::string> parent_id;
  std::vector<std::string> children;
  bool alive = true;
  nlohmann::json memory_doc;       // agent-owned, engine stores verbatim
  nlohmann::json short_term_plan;  // agent-owned, engine stores verbatim
  int birth_step = 0;
  std::optional<int> death_step;
};

struct PlantNode {
  std::string plant_id;
  int quantity = 0;
  int capacity = 0;
  int nutrition_per_unit = 0;
  int respawn_delay = 0;
  int steps_until_respawn = 0;  // > 0 only while depleted
};

struct PreyAnimal {
  std::string prey_id;
  int hp = 0;
  int max_hp = 0;
  double physical_ability = 0.0;
  int counter_damage = kPreyCounterDamage;
  int num_agents_to_kill = 0;  // prompt hint only, never used in mechanics
};

struct EventRecord {
  int step = 0;
  int round_index = -1;  // -1 for environment/lifecycle records
  std::string phase;     // "social" | "production" | "environment"
  std::string actor_id;
  std::string kind;  // action kind, or birth/death/environment_update
  std::vector<std::string> targets;
  nlohmann::json parameters = nlohmann::json::object();
  bool success = false;
  std::map<std::string, int> hp_deltas;
  std::optional<std::string> message;
  std::optional<std::string> failure_reason;

  nlohmann::json to_json() const;
  static EventRecord from_json(const nlohmann::json& j);
};

// Receives every EventRecord in emission order.
struct EventSink {
  virtual ~EventSink() = default;
  virtual void emit(const EventRecord& ev) = 0;
};

class NullSink final : public EventSink {
 public:
  void emit(const EventRecord&) override {}
};

// Collects events in memory (tests, perception rebuilding).
class VectorSink final : public EventSink {
 public:
  void emit(const EventRecord& ev) override { events.push_back(ev); }
  std::vector<EventRecord> events;
};

struct WorldState {
  int step = 0;  // last completed step; 0 right after initialization
  std::vector<AgentState> agents;
  std::vector<PlantNode> plants;
  std::vector<PreyAnimal> prey;
  std::vector<std::string> execution_queue;  // queue for the upcoming step
  RngStream rng;
  std::uint64_t next_agent_ordinal = 1;
  std::uint64_t next_prey_ordinal = 1;
  std::uint64_t events_logged = 0;
  std::optional<std::string> termination_reason;

  AgentState* find_agent(const std::string& id);
  const AgentState* find_agent(const std::string& id) const;
  PlantNode* find_plant(const std::string& id);
  const PlantNode* find_plant(const std::string& id) const;
  PreyAnimal* find_prey(const std::string& id);
  const PreyAnimal* find_prey(const std::string& id) const;

  std::vector<const AgentState*> living_agents() const;
  int living_count() const;

  // Creates a newborn (id allocation, PA draw, parent/child links) without logging.
  AgentState& create_child(const std::string& parent_id, const SimulationConfig& cfg);

  void record_birth(const AgentState& agent, int round_index, const std::string& phase,
                    EventSink& sink);

  void record_death(AgentState& agent, DeathCause cause, int round_index,
                    const std::string& phase, EventSink& sink);
};

struct Checkpoint {
  int schema_version = 1;
  std::string config_hash;
  int step_cursor = 0;
  std::uint64_t event_log_length = 0;
  std::string rng_state;
  nlohmann::json world;  // full WorldState serialization

  nlohmann::json to_json() const;
  static Checkpoint from_json(const nlohmann::json& j);
};

// Builds the initial world: agents with largest-remainder type allocation,
// abundance-scaled plant/prey populations, and the step-1 execution queue.
// Emits one birth record per founder (step 0).
WorldState initialize_world(const SimulationConfig& cfg, EventSink& sink);

// Start-of-step upkeep: plant lifecycle, prey respawn/removal, metabolic cost,
// aging, and the resulting deaths. Emits one environment_update record plus
// death records. `step` is the step now beginning.
void environment_update(WorldState& state, const SimulationConfig& cfg, int step, EventSink& sink);

Checkpoint snapshot(const WorldState& state, const SimulationConfig& cfg);
WorldState restore(const Checkpoint& cp, const SimulationConfig& cfg);

nlohmann::json world_to_json(const WorldState& state);
WorldState world_from_json(const nlohmann::json& j);

}  // namespace moralsim
