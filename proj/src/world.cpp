#include "moralsim/world.hpp"

#include <algorithm>
#include <cmath>

namespace moralsim {

using nlohmann::json;

namespace {

json optional_str(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> str_or_null(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

// Default long-term memory skeleton handed to newborns and founders.
json empty_memory_doc() {
  return json{
      {"Prey_Hunting_Collaboration_Distribution_Retaliation_Memory_And_Planning",
       "no content yet"},
      {"Agent_Specific_Memory", "no content yet"},
      {"Family_Plan", "no content yet"},
      {"Plan_For_Reproduction", "no content yet"},
      {"Strategies", "no content yet"},
  };
}

json empty_plan() {
  return json{{"reasoning_for_prioritizing_plans_and_goals", "no content yet"},
              {"next_steps_plan", "no content yet"}};
}

int sample_prey_max_hp(RngStream& rng, const PreyParams& pp) {
  const double raw = rng.gaussian(pp.hp_mean, pp.hp_std) * pp.difficulty;
  return std::max(1, static_cast<int>(std::llround(raw)));
}

PreyAnimal make_prey(WorldState& state, const SimulationConfig& cfg) {
  PreyAnimal prey;
  prey.prey_id = "prey_" + std::to_string(state.next_prey_ordinal++);
  prey.max_hp = sample_prey_max_hp(state.rng, cfg.prey_params);
  prey.hp = prey.max_hp;
  prey.physical_ability = cfg.prey_params.physical_ability;
  prey.counter_damage = kPreyCounterDamage;
  prey.num_agents_to_kill = cfg.typical_agents_to_kill(prey.max_hp);
  return prey;
}

}  // namespace

json EventRecord::to_json() const {
  json j{
      {"step", step},
      {"round_index", round_index},
      {"phase", phase},
      {"actor_id", actor_id},
      {"kind", kind},
      {"targets", targets},
      {"parameters", parameters},
      {"success", success},
      {"hp_deltas", hp_deltas},
  };
  if (message) j["message"] = *message;
  if (failure_reason) j["failure_reason"] = *failure_reason;
  return j;
}

EventRecord EventRecord::from_json(const json& j) {
  EventRecord ev;
  ev.step = j.at("step").get<int>();
  ev.round_index = j.at("round_index").get<int>();
  ev.phase = j.at("phase").get<std::string>();
  ev.actor_id = j.at("actor_id").get<std::string>();
  ev.kind = j.at("kind").get<std::string>();
  ev.targets = j.at("targets").get<std::vector<std::string>>();
  ev.parameters = j.at("parameters");
  ev.success = j.at("success").get<bool>();
  ev.hp_deltas = j.at("hp_deltas").get<std::map<std::string, int>>();
  if (j.contains("message") && !j.at("message").is_null())
    ev.message = j.at("message").get<std::string>();
  if (j.contains("failure_reason") && !j.at("failure_reason").is_null())
    ev.failure_reason = j.at("failure_reason").get<std::string>();
  return ev;
}

AgentState* WorldState::find_agent(const std::string& id) {
  for (auto& a : agents)
    if (a.agent_id == id) return &a;
  return nullptr;
}

const AgentState* WorldState::find_agent(const std::string& id) const {
  for (const auto& a : agents)
    if (a.agent_id == id) return &a;
  return nullptr;
}

PlantNode* WorldState::find_plant(const std::string& id) {
  for (auto& p : plants)
    if (p.plant_id == id) return &p;
  return nullptr;
}

const PlantNode* WorldState::find_plant(const std::string& id) const {
  for (const auto& p : plants)
    if (p.plant_id == id) return &p;
  return nullptr;
}

PreyAnimal* WorldState::find_prey(const std::string& id) {
  for (auto& p : prey)
    if (p.prey_id == id) return &p;
  return nullptr;
}

const PreyAnimal* WorldState::find_prey(const std::string& id) const {
  for (const auto& p : prey)
    if (p.prey_id == id) return &p;
  return nullptr;
}

std::vector<const AgentState*> WorldState::living_agents() const {
  std::vector<const AgentState*> out;
  for (const auto& a : agents)
    if (a.alive) out.push_back(&a);
  return out;
}

int WorldState::living_count() const {
  int n = 0;
  for (const auto& a : agents)
    if (a.alive) ++n;
  return n;
}

AgentState& WorldState::create_child(const std::string& parent_id, const SimulationConfig& cfg) {
  AgentState* parent = find_agent(parent_id);
  AgentState child;
  child.agent_id = "agent_" + std::to_string(next_agent_ordinal++);
  child.moral_type = parent->moral_type;
  child.hp = std::min(cfg.offspring_hp, cfg.max_hp);
  child.max_hp = cfg.max_hp;
  child.age = 0;
  child.physical_ability = rng.gaussian(cfg.pa_mean, cfg.pa_std);
  child.parent_id = parent_id;
  child.alive = child.hp > 0;
  child.memory_doc = empty_memory_doc();
  child.short_term_plan = empty_plan();
  child.birth_step = step;
  parent->children.push_back(child.agent_id);
  agents.push_back(child);
  return agents.back();
}

void WorldState::record_birth(const AgentState& agent, int round_index, const std::string& phase,
                              EventSink& sink) {
  EventRecord ev;
  ev.step = step;
  ev.round_index = round_index;
  ev.phase = phase;
  ev.actor_id = agent.agent_id;
  ev.kind = std::string(kEventKindBirth);
  ev.parameters = json{{"parent_id", agent.parent_id ? json(*agent.parent_id) : json(nullptr)},
                       {"moral_type", to_string(agent.moral_type)},
                       {"initial_hp", agent.hp}};
  ev.success = true;
  ++events_logged;
  sink.emit(ev);
}

void WorldState::record_death(AgentState& agent, DeathCause cause, int round_index,
                              const std::string& phase, EventSink& sink) {
  agent.alive = false;
  agent.death_step = step;

  EventRecord ev;
  ev.step = step;
  ev.round_index = round_index;
  ev.phase = phase;
  ev.actor_id = agent.agent_id;
  ev.kind = std::string(kEventKindDeath);
  ev.parameters = json{{"cause", to_string(cause)},
                       {"age", agent.age},
                       {"final_hp", agent.hp},
                       {"moral_type", to_string(agent.moral_type)}};
  ev.success = true;
  ++events_logged;
  sink.emit(ev);
}

WorldState initialize_world(const SimulationConfig& cfg, EventSink& sink) {
  WorldState state;
  state.step = 0;

  const int n_plants = cfg.scaled_plant_nodes();
  for (int i = 0; i < n_plants; ++i) {
    PlantNode plant;
    plant.plant_id = "plant_" + std::to_string(i + 1);
    plant.quantity = cfg.plant_params.initial_quantity;
    plant.capacity = cfg.plant_params.capacity;
    plant.nutrition_per_unit = cfg.plant_params.nutrition;
    plant.respawn_delay = cfg.plant_params.respawn_delay;
    plant.steps_until_respawn = plant.quantity == 0 ? plant.respawn_delay : 0;
    state.plants.push_back(plant);
  }

  state.rng = RngStream(cfg.rng_seed);
  const int n_prey = cfg.scaled_initial_prey();
  for (int i = 0; i < n_prey; ++i) state.prey.push_back(make_prey(state, cfg));

  const auto counts = allocate_type_counts(cfg.type_distribution, cfg.initial_agent_count);
  for (MoralType t : kAllMoralTypes) {
    for (int i = 0; i < counts.at(t); ++i) {
      AgentState agent;
      agent.agent_id = "agent_" + std::to_string(state.next_agent_ordinal++);
      agent.moral_type = t;
      agent.hp = cfg.initial_hp;
      agent.max_hp = cfg.max_hp;
      agent.age = cfg.initial_age;
      agent.physical_ability = state.rng.gaussian(cfg.pa_mean, cfg.pa_std);
      agent.alive = agent.hp > 0;
      agent.memory_doc = empty_memory_doc();
      agent.short_term_plan = empty_plan();
      agent.birth_step = 0;
      state.agents.push_back(agent);
      state.record_birth(state.agents.back(), -1, "environment", sink);
    }
  }

  // Queue for step 1; later steps reshuffle at their start.
  for (const auto& a : state.agents) state.execution_queue.push_back(a.agent_id);
  state.rng.shuffle(state.execution_queue);

  return state;
}

void environment_update(WorldState& state, const SimulationConfig& cfg, int step,
                        EventSink& sink) {
  state.step = step;

  EventRecord ev;
  ev.step = step;
  ev.round_index = -1;
  ev.phase = "environment";
  ev.actor_id = "environment";
  ev.kind = std::string(kEventKindEnvironment);
  ev.success = true;

  // Plants: respawn countdown, then regrowth toward capacity.
  std::vector<std::string> respawned, grown;
  for (auto& plant : state.plants) {
    if (plant.steps_until_respawn > 0) {
      --plant.steps_until_respawn;
      if (plant.steps_until_respawn == 0) {
        plant.quantity = plant.capacity;
        respawned.push_back(plant.plant_id);
      }
    } else if (plant.quantity > 0 && plant.quantity < plant.capacity) {
      ++plant.quantity;
      grown.push_back(plant.plant_id);
    }
  }

  // Prey: one spawn draw per empty slot while under the cap, then a sweep of dead prey.
  const int max_prey = cfg.scaled_max_prey();
  std::vector<std::string> spawned;
  const int empty_slots = std::max(0, max_prey - static_cast<int>(state.prey.size()));
  for (int slot = 0; slot < empty_slots; ++slot) {
    if (static_cast<int>(state.prey.size()) >= max_prey) break;
    if (state.rng.bernoulli(cfg.prey_params.respawn_rate)) {
      state.prey.push_back(make_prey(state, cfg));
      spawned.push_back(state.prey.back().prey_id);
    }
  }
  std::erase_if(state.prey, [](const PreyAnimal& p) { return p.hp <= 0; });

  // Agent upkeep: metabolic cost, then aging. Deaths recorded after both.
  std::vector<AgentState*> died;
  for (auto& agent : state.agents) {
    if (!agent.alive) continue;
    const int paid = std::min(cfg.metabolic_cost_per_step, agent.hp);
    if (paid != 0) ev.hp_deltas[agent.agent_id] = -paid;
    agent.hp -= paid;
    agent.age += 1;
  }
  ev.parameters = json{{"plants_respawned", respawned},
                       {"plants_grown", grown},
                       {"prey_spawned", spawned}};
  ++state.events_logged;
  sink.emit(ev);

  for (auto& agent : state.agents) {
    if (!agent.alive) continue;
    if (agent.hp <= 0) {
      state.record_death(agent, DeathCause::starvation, -1, "environment", sink);
    } else if (agent.age > cfg.max_age) {
      state.record_death(agent, DeathCause::old_age, -1, "environment", sink);
    }
  }
}

json world_to_json(const WorldState& state) {
  json agents = json::array();
  for (const auto& a : state.agents) {
    agents.push_back(json{
        {"agent_id", a.agent_id},
        {"moral_type", to_string(a.moral_type)},
        {"hp", a.hp},
        {"max_hp", a.max_hp},
        {"age", a.age},
        {"physical_ability", a.physical_ability},
        {"parent_id", optional_str(a.parent_id)},
        {"children", a.children},
        {"alive", a.alive},
        {"memory_doc", a.memory_doc},
        {"short_term_plan", a.short_term_plan},
        {"birth_step", a.birth_step},
        {"death_step", a.death_step ? json(*a.death_step) : json(nullptr)},
    });
  }
  json plants = json::array();
  for (const auto& p : state.plants) {
    plants.push_back(json{
        {"plant_id", p.plant_id},
        {"quantity", p.quantity},
        {"capacity", p.capacity},
        {"nutrition_per_unit", p.nutrition_per_unit},
        {"respawn_delay", p.respawn_delay},
        {"steps_until_respawn", p.steps_until_respawn},
    });
  }
  json prey = json::array();
  for (const auto& p : state.prey) {
    prey.push_back(json{
        {"prey_id", p.prey_id},
        {"hp", p.hp},
        {"max_hp", p.max_hp},
        {"physical_ability", p.physical_ability},
        {"counter_damage", p.counter_damage},
        {"num_agents_to_kill", p.num_agents_to_kill},
    });
  }
  return json{
      {"step", state.step},
      {"agents", agents},
      {"plants", plants},
      {"prey", prey},
      {"execution_queue", state.execution_queue},
      {"rng_state", state.rng.save_state()},
      {"next_agent_ordinal", state.next_agent_ordinal},
      {"next_prey_ordinal", state.next_prey_ordinal},
      {"events_logged", state.events_logged},
      {"termination_reason",
       state.termination_reason ? json(*state.termination_reason) : json(nullptr)},
  };
}

WorldState world_from_json(const json& j) {
  WorldState state;
  state.step = j.at("step").get<int>();
  for (const auto& a : j.at("agents")) {
    AgentState agent;
    agent.agent_id = a.at("agent_id").get<std::string>();
    agent.moral_type = moral_type_from_string(a.at("moral_type").get<std::string>());
    agent.hp = a.at("hp").get<int>();
    agent.max_hp = a.at("max_hp").get<int>();
    agent.age = a.at("age").get<int>();
    agent.physical_ability = a.at("physical_ability").get<double>();
    agent.parent_id = str_or_null(a, "parent_id");
    agent.children = a.at("children").get<std::vector<std::string>>();
    agent.alive = a.at("alive").get<bool>();
    agent.memory_doc = a.at("memory_doc");
    agent.short_term_plan = a.at("short_term_plan");
    agent.birth_step = a.at("birth_step").get<int>();
    if (!a.at("death_step").is_null()) agent.death_step = a.at("death_step").get<int>();
    state.agents.push_back(agent);
  }
  for (const auto& p : j.at("plants")) {
    PlantNode plant;
    plant.plant_id = p.at("plant_id").get<std::string>();
    plant.quantity = p.at("quantity").get<int>();
    plant.capacity = p.at("capacity").get<int>();
    plant.nutrition_per_unit = p.at("nutrition_per_unit").get<int>();
    plant.respawn_delay = p.at("respawn_delay").get<int>();
    plant.steps_until_respawn = p.at("steps_until_respawn").get<int>();
    state.plants.push_back(plant);
  }
  for (const auto& p : j.at("prey")) {
    PreyAnimal prey;
    prey.prey_id = p.at("prey_id").get<std::string>();
    prey.hp = p.at("hp").get<int>();
    prey.max_hp = p.at("max_hp").get<int>();
    prey.physical_ability = p.at("physical_ability").get<double>();
    prey.counter_damage = p.at("counter_damage").get<int>();
    prey.num_agents_to_kill = p.at("num_agents_to_kill").get<int>();
    state.prey.push_back(prey);
  }
  state.execution_queue = j.at("execution_queue").get<std::vector<std::string>>();
  state.rng.load_state(j.at("rng_state").get<std::string>());
  state.next_agent_ordinal = j.at("next_agent_ordinal").get<std::uint64_t>();
  state.next_prey_ordinal = j.at("next_prey_ordinal").get<std::uint64_t>();
  state.events_logged = j.at("events_logged").get<std::uint64_t>();
  if (!j.at("termination_reason").is_null())
    state.termination_reason = j.at("termination_reason").get<std::string>();
  return state;
}

json Checkpoint::to_json() const {
  return json{
      {"schema_version", schema_version},
      {"config_hash", config_hash},
      {"step_cursor", step_cursor},
      {"event_log_length", event_log_length},
      {"rng_state", rng_state},
      {"world", world},
  };
}

Checkpoint Checkpoint::from_json(const json& j) {
  Checkpoint cp;
  cp.schema_version = j.at("schema_version").get<int>();
  cp.config_hash = j.at("config_hash").get<std::string>();
  cp.step_cursor = j.at("step_cursor").get<int>();
  cp.event_log_length = j.at("event_log_length").get<std::uint64_t>();
  cp.rng_state = j.at("rng_state").get<std::string>();
  cp.world = j.at("world");
  return cp;
}

Checkpoint snapshot(const WorldState& state, const SimulationConfig& cfg) {
  Checkpoint cp;
  cp.config_hash = config_hash(cfg);
  cp.step_cursor = state.step;
  cp.event_log_length = state.events_logged;
  cp.rng_state = state.rng.save_state();
  cp.world = world_to_json(state);
  return cp;
}

WorldState restore(const Checkpoint& cp, const SimulationConfig& cfg) {
  if (cp.config_hash != config_hash(cfg)) {
    throw ValidationError("checkpoint config hash mismatch: expected " + config_hash(cfg) +
                          ", checkpoint has " + cp.config_hash);
  }
  try {
    return world_from_json(cp.world);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("corrupt checkpoint: ") + e.what());
  }
}

}  // namespace moralsim
