#include "moralsim/actions.hpp"

#include <algorithm>
#include <cmath>

namespace moralsim {

using nlohmann::json;

namespace {

int clamp_hp(long long v, int max_hp) {
  return static_cast<int>(std::clamp(v, 0ll, static_cast<long long>(max_hp)));
}

EventRecord base_event(const ActionRequest& req, const RoundContext& ctx) {
  EventRecord ev;
  ev.step = ctx.step;
  ev.round_index = ctx.round_index;
  ev.phase = ctx.phase;
  ev.actor_id = req.actor_id;
  ev.kind = to_string(req.kind);
  return ev;
}

ActionOutcome nullify(WorldState& state, const ActionRequest& req, const RoundContext& ctx,
                      EventSink& sink, const std::string& reason) {
  ActionOutcome out;
  out.nullified = true;
  out.event = base_event(req, ctx);
  out.event.success = false;
  out.event.failure_reason = reason;
  ++state.events_logged;
  sink.emit(out.event);
  return out;
}

// Attacker damage: floor of the real-valued physical ability, never negative.
int melee_damage(double physical_ability) {
  return std::max(0, static_cast<int>(std::floor(physical_ability)));
}

}  // namespace

std::string to_string(MessageIntent i) {
  return i == MessageIntent::collaboration_invite ? "collaboration_invite" : "general";
}

MessageIntent message_intent_from_string(std::string_view s) {
  if (s == "collaboration_invite") return MessageIntent::collaboration_invite;
  if (s == "general") return MessageIntent::general;
  throw ValidationError("unknown message intent: " + std::string(s));
}

json ActionRequest::to_json() const {
  json j{{"action_type", to_string(kind)}};
  switch (kind) {
    case ActionKind::collect:
      j["target_id"] = target_id.value_or("");
      j["requested_quantity"] = requested_quantity;
      break;
    case ActionKind::hunt:
    case ActionKind::fight:
      j["target_id"] = target_id.value_or("");
      break;
    case ActionKind::rob:
      j["target_id"] = target_id.value_or("");
      j["requested_quantity"] = requested_quantity;
      break;
    case ActionKind::allocate:
      j["allocation_plan"] = allocation_plan;
      break;
    case ActionKind::communicate:
      j["recipients"] = recipients;
      j["message"] = message;
      j["intent"] = to_string(intent);
      break;
    case ActionKind::reproduce:
    case ActionKind::do_nothing:
      break;
  }
  return j;
}

ActionRequest ActionRequest::from_json(const json& j) {
  ActionRequest req;
  if (!j.is_object()) throw ValidationError("action: expected an object");
  if (!j.contains("action_type") || !j.at("action_type").is_string())
    throw ValidationError("action.action_type: missing or not a string");
  req.kind = action_kind_from_string(j.at("action_type").get<std::string>());

  auto allowed = [&](std::initializer_list<std::string> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "action_type") continue;
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
        throw ValidationError("action: unexpected field \"" + it.key() + "\" for " +
                              to_string(req.kind));
    }
  };

  switch (req.kind) {
    case ActionKind::collect:
      allowed({"target_id", "requested_quantity"});
      if (!j.contains("target_id") || !j.at("target_id").is_string())
        throw ValidationError("action.target_id: required for collect");
      if (!j.contains("requested_quantity") || !j.at("requested_quantity").is_number_integer())
        throw ValidationError("action.requested_quantity: required integer for collect");
      req.target_id = j.at("target_id").get<std::string>();
      req.requested_quantity = j.at("requested_quantity").get<int>();
      break;
    case ActionKind::hunt:
    case ActionKind::fight:
      allowed({"target_id"});
      if (!j.contains("target_id") || !j.at("target_id").is_string())
        throw ValidationError("action.target_id: required for " + to_string(req.kind));
      req.target_id = j.at("target_id").get<std::string>();
      break;
    case ActionKind::rob:
      allowed({"target_id", "requested_quantity"});
      if (!j.contains("target_id") || !j.at("target_id").is_string())
        throw ValidationError("action.target_id: required for rob");
      if (!j.contains("requested_quantity") || !j.at("requested_quantity").is_number_integer())
        throw ValidationError("action.requested_quantity: required integer for rob");
      req.target_id = j.at("target_id").get<std::string>();
      req.requested_quantity = j.at("requested_quantity").get<int>();
      break;
    case ActionKind::allocate: {
      allowed({"allocation_plan"});
      if (!j.contains("allocation_plan") || !j.at("allocation_plan").is_object())
        throw ValidationError("action.allocation_plan: required object for allocate");
      for (auto it = j.at("allocation_plan").begin(); it != j.at("allocation_plan").end(); ++it) {
        if (!it.value().is_number_integer())
          throw ValidationError("action.allocation_plan: amounts must be integers");
        req.allocation_plan[it.key()] = it.value().get<int>();
      }
      break;
    }
    case ActionKind::communicate:
      allowed({"recipients", "message", "intent"});
      if (!j.contains("recipients") || !j.at("recipients").is_array())
        throw ValidationError("action.recipients: required array for communicate");
      if (!j.contains("message") || !j.at("message").is_string())
        throw ValidationError("action.message: required string for communicate");
      req.recipients = j.at("recipients").get<std::vector<std::string>>();
      req.message = j.at("message").get<std::string>();
      if (j.contains("intent")) {
        if (!j.at("intent").is_string())
          throw ValidationError("action.intent: must be a string");
        req.intent = message_intent_from_string(j.at("intent").get<std::string>());
      }
      break;
    case ActionKind::reproduce:
    case ActionKind::do_nothing:
      allowed({});
      break;
  }
  return req;
}

double success_probability(double delta_pa, double intercept, double slope) {
  if (slope == 0.0) throw std::domain_error("success_probability: slope must be nonzero");
  const double raw = (0.5 + intercept) + 0.4 * std::tanh(delta_pa / slope);
  return std::min(std::max(raw, 0.1), 0.9);
}

std::vector<ActionKind> legal_actions_for(bool social_round) {
  if (social_round) {
    return {ActionKind::communicate, ActionKind::allocate, ActionKind::fight, ActionKind::rob,
            ActionKind::do_nothing};
  }
  return {ActionKind::reproduce, ActionKind::hunt, ActionKind::collect, ActionKind::do_nothing};
}

ActionOutcome resolve_collect(WorldState& state, const SimulationConfig& cfg,
                              const ActionRequest& req, const RoundContext& ctx, EventSink& sink) {
  AgentState* actor = state.find_agent(req.actor_id);
  if (!req.target_id) return nullify(state, req, ctx, sink, "collect requires a plant target");
  PlantNode* plant = state.find_plant(*req.target_id);
  if (!plant) return nullify(state, req, ctx, sink, "no such plant: " + *req.target_id);
  if (req.requested_quantity <= 0)
    return nullify(state, req, ctx, sink, "requested quantity must be positive");
  if (plant->quantity < req.requested_quantity)
    return nullify(state, req, ctx, sink,
                   "plant " + plant->plant_id + " has " + std::to_string(plant->quantity) +
                       " units, requested " + std::to_string(req.requested_quantity));

  const int collected = std::min({req.requested_quantity, plant->quantity, cfg.collect_cap});
  if (collected <= 0) return nullify(state, req, ctx, sink, "nothing collectible");

  const int before = actor->hp;
  actor->hp = clamp_hp(static_cast<long long>(actor->hp) +
                           static_cast<long long>(collected) * plant->nutrition_per_unit,
                       actor->max_hp);
  plant->quantity -= collected;
  if (plant->quantity == 0) plant->steps_until_respawn = plant->respawn_delay;

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.targets = {plant->plant_id};
  out.event.success = true;
  out.event.parameters = json{{"requested_quantity", req.requested_quantity},
                              {"collected", collected},
                              {"nutrition_per_unit", plant->nutrition_per_unit}};
  if (actor->hp != before) out.event.hp_deltas[actor->agent_id] = actor->hp - before;
  ++state.events_logged;
  sink.emit(out.event);
  return out;
}

ActionOutcome resolve_allocate(WorldState& state, const SimulationConfig& cfg,
                               const ActionRequest& req, const RoundContext& ctx,
                               EventSink& sink) {
  (void)cfg;
  AgentState* actor = state.find_agent(req.actor_id);
  if (req.allocation_plan.empty())
    return nullify(state, req, ctx, sink, "allocation plan is empty");

  long long total = 0;
  for (const auto& [target_id, amount] : req.allocation_plan) {
    if (amount <= 0)
      return nullify(state, req, ctx, sink, "allocation amounts must be positive integers");
    if (target_id == req.actor_id)
      return nullify(state, req, ctx, sink, "cannot allocate to self");
    const AgentState* target = state.find_agent(target_id);
    if (!target || !target->alive)
      return nullify(state, req, ctx, sink, "target not alive: " + target_id);
    total += amount;
  }
  if (static_cast<long long>(actor->hp) <= total)
    return nullify(state, req, ctx, sink,
                   "insufficient HP: have " + std::to_string(actor->hp) + ", allocating " +
                       std::to_string(total) + " (donor HP must strictly exceed the total)");

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.success = true;

  actor->hp -= static_cast<int>(total);
  out.event.hp_deltas[actor->agent_id] = -static_cast<int>(total);
  json plan = json::object();
  for (const auto& [target_id, amount] : req.allocation_plan) {
    AgentState* target = state.find_agent(target_id);
    const int before = target->hp;
    target->hp = clamp_hp(static_cast<long long>(target->hp) + amount, target->max_hp);
    if (target->hp != before) out.event.hp_deltas[target_id] += target->hp - before;
    out.event.targets.push_back(target_id);
    plan[target_id] = amount;
  }
  out.event.parameters = json{{"allocation_plan", plan}, {"total", total}};
  ++state.events_logged;
  sink.emit(out.event);
  return out;
}

ActionOutcome resolve_fight(WorldState& state, const SimulationConfig& cfg,
                            const ActionRequest& req, const RoundContext& ctx,
                            RandomSource& random, EventSink& sink) {
  AgentState* actor = state.find_agent(req.actor_id);
  if (!req.target_id) return nullify(state, req, ctx, sink, "fight requires a target");
  if (*req.target_id == req.actor_id) return nullify(state, req, ctx, sink, "cannot fight self");
  AgentState* target = state.find_agent(*req.target_id);
  if (!target || !target->alive)
    return nullify(state, req, ctx, sink, "target not alive: " + *req.target_id);

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.targets = {target->agent_id};

  // Initiation cost comes first; an actor killed by it consumes no draw.
  actor->hp -= 1;
  out.event.hp_deltas[actor->agent_id] = -1;

  if (actor->hp <= 0) {
    actor->hp = 0;
    out.actor_died = true;
    out.event.success = false;
    out.event.parameters = json{{"resolution", "actor_died_on_cost"}};
    ++state.events_logged;
    sink.emit(out.event);
    state.record_death(*actor, DeathCause::action_cost_exhaustion, ctx.round_index, ctx.phase,
                       sink);
    return out;
  }

  const double p = success_probability(actor->physical_ability - target->physical_ability,
                                       cfg.pa_intercept, cfg.pa_slope);
  const bool hit = random.bernoulli(p);
  out.event.parameters = json{{"success_probability", p}};

  if (hit) {
    const int damage = melee_damage(actor->physical_ability);
    const int before = target->hp;
    target->hp = clamp_hp(static_cast<long long>(target->hp) - damage, target->max_hp);
    if (target->hp != before) out.event.hp_deltas[target->agent_id] = target->hp - before;
    out.event.success = true;
    out.event.parameters["damage"] = before - target->hp;
    out.event.parameters["resolution"] = "success";
  } else {
    out.event.success = false;
    out.event.parameters["resolution"] = "failure";
  }
  ++state.events_logged;
  sink.emit(out.event);

  if (hit && target->hp <= 0) {
    out.target_died = true;
    state.record_death(*target, DeathCause::killed_in_fight, ctx.round_index, ctx.phase, sink);
  }
  return out;
}

ActionOutcome resolve_rob(WorldState& state, const SimulationConfig& cfg, const ActionRequest& req,
                          const RoundContext& ctx, RandomSource& random, EventSink& sink) {
  AgentState* actor = state.find_agent(req.actor_id);
  if (!req.target_id) return nullify(state, req, ctx, sink, "rob requires a target");
  if (*req.target_id == req.actor_id) return nullify(state, req, ctx, sink, "cannot rob self");
  AgentState* target = state.find_agent(*req.target_id);
  if (!target || !target->alive)
    return nullify(state, req, ctx, sink, "target not alive: " + *req.target_id);
  if (req.requested_quantity <= 0)
    return nullify(state, req, ctx, sink, "requested amount must be positive");
  if (target->hp < req.requested_quantity)
    return nullify(state, req, ctx, sink,
                   "target " + target->agent_id + " has " + std::to_string(target->hp) +
                       " HP, cannot yield " + std::to_string(req.requested_quantity));

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.targets = {target->agent_id};
  out.event.parameters = json{{"requested_amount", req.requested_quantity}};

  actor->hp -= 1;
  out.event.hp_deltas[actor->agent_id] = -1;

  if (actor->hp <= 0) {
    actor->hp = 0;
    out.actor_died = true;
    out.event.success = false;
    out.event.parameters["resolution"] = "actor_died_on_cost";
    ++state.events_logged;
    sink.emit(out.event);
    state.record_death(*actor, DeathCause::action_cost_exhaustion, ctx.round_index, ctx.phase,
                       sink);
    return out;
  }

  const double p = success_probability(actor->physical_ability - target->physical_ability,
                                       cfg.pa_intercept, cfg.pa_slope);
  const bool hit = random.bernoulli(p);
  out.event.parameters["success_probability"] = p;

  if (hit) {
    const int target_before = target->hp;
    const int actor_before = actor->hp;
    target->hp = clamp_hp(static_cast<long long>(target->hp) - req.requested_quantity,
                          target->max_hp);
    actor->hp = clamp_hp(static_cast<long long>(actor->hp) + req.requested_quantity,
                         actor->max_hp);
    out.event.hp_deltas[actor->agent_id] += actor->hp - actor_before;
    if (out.event.hp_deltas[actor->agent_id] == 0) out.event.hp_deltas.erase(actor->agent_id);
    if (target->hp != target_before) out.event.hp_deltas[target->agent_id] = target->hp - target_before;
    out.event.success = true;
    out.event.parameters["resolution"] = "success";
  } else {
    out.event.success = false;
    out.event.parameters["resolution"] = "failure";
  }
  ++state.events_logged;
  sink.emit(out.event);

  if (hit && target->hp <= 0) {
    out.target_died = true;
    state.record_death(*target, DeathCause::killed_in_rob, ctx.round_index, ctx.phase, sink);
  }
  return out;
}

ActionOutcome resolve_hunt(WorldState& state, const SimulationConfig& cfg,
                           const ActionRequest& req, const RoundContext& ctx,
                           RandomSource& random, EventSink& sink) {
  AgentState* actor = state.find_agent(req.actor_id);
  if (!req.target_id) return nullify(state, req, ctx, sink, "hunt requires a prey target");
  PreyAnimal* prey = state.find_prey(*req.target_id);
  if (!prey || prey->hp <= 0)
    return nullify(state, req, ctx, sink, "no such prey: " + *req.target_id);

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.targets = {prey->prey_id};

  actor->hp -= 1;
  out.event.hp_deltas[actor->agent_id] = -1;

  if (actor->hp <= 0) {
    actor->hp = 0;
    out.actor_died = true;
    out.event.success = false;
    out.event.parameters = json{{"resolution", "actor_died_on_cost"}};
    ++state.events_logged;
    sink.emit(out.event);
    state.record_death(*actor, DeathCause::action_cost_exhaustion, ctx.round_index, ctx.phase,
                       sink);
    return out;
  }

  const double p = success_probability(actor->physical_ability - prey->physical_ability,
                                       cfg.pa_intercept, cfg.pa_slope);
  const bool hit = random.bernoulli(p);
  out.event.parameters = json{{"success_probability", p}};

  if (hit) {
    const int damage = std::min(melee_damage(actor->physical_ability), prey->hp);
    prey->hp -= damage;
    if (damage != 0) out.event.hp_deltas[prey->prey_id] = -damage;
    out.event.success = true;
    out.event.parameters["damage"] = damage;
    if (prey->hp <= 0) {
      const int actor_before = actor->hp;
      actor->hp = clamp_hp(static_cast<long long>(actor->hp) + prey->max_hp, actor->max_hp);
      out.event.hp_deltas[actor->agent_id] += actor->hp - actor_before;
      if (out.event.hp_deltas[actor->agent_id] == 0) out.event.hp_deltas.erase(actor->agent_id);
      out.prey_killed = true;
      out.reward_granted = true;
      out.event.parameters["prey_killed"] = true;
      out.event.parameters["reward"] = actor->hp - actor_before;
      out.event.parameters["prey_max_hp"] = prey->max_hp;
      out.event.parameters["resolution"] = "killed";
      const std::string prey_id = prey->prey_id;
      std::erase_if(state.prey, [&](const PreyAnimal& p2) { return p2.prey_id == prey_id; });
    } else {
      out.event.parameters["prey_killed"] = false;
      out.event.parameters["resolution"] = "damaged";
    }
  } else {
    const int before = actor->hp;
    actor->hp = clamp_hp(static_cast<long long>(actor->hp) - prey->counter_damage, actor->max_hp);
    out.event.hp_deltas[actor->agent_id] += actor->hp - before;
    if (out.event.hp_deltas[actor->agent_id] == 0) out.event.hp_deltas.erase(actor->agent_id);
    out.event.success = false;
    out.event.parameters["counter_damage"] = before - actor->hp;
    out.event.parameters["resolution"] = "counter_attacked";
  }
  ++state.events_logged;
  sink.emit(out.event);

  if (!hit && actor->hp <= 0) {
    out.actor_died = true;
    state.record_death(*actor, DeathCause::killed_by_prey, ctx.round_index, ctx.phase, sink);
  }
  return out;
}

ActionOutcome resolve_reproduce(WorldState& state, const SimulationConfig& cfg,
                                const ActionRequest& req, const RoundContext& ctx,
                                EventSink& sink) {
  AgentState* actor = state.find_agent(req.actor_id);
  if (actor->age < cfg.min_age_repro)
    return nullify(state, req, ctx, sink,
                   "minimum age " + std::to_string(cfg.min_age_repro) + " (actor age " +
                       std::to_string(actor->age) + ")");
  if (actor->hp < cfg.min_hp_repro)
    return nullify(state, req, ctx, sink,
                   "minimum HP " + std::to_string(cfg.min_hp_repro) + " (actor HP " +
                       std::to_string(actor->hp) + ")");

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.success = true;

  const int before = actor->hp;
  actor->hp = clamp_hp(static_cast<long long>(actor->hp) - cfg.hp_cost_repro, actor->max_hp);
  const std::string parent_id = actor->agent_id;

  // Child creation consumes the PA draw; creation may reallocate the agent vector.
  const std::string child_id = state.create_child(parent_id, cfg).agent_id;
  actor = state.find_agent(parent_id);
  const AgentState* child = state.find_agent(child_id);

  out.event.hp_deltas[parent_id] = actor->hp - before;
  out.event.hp_deltas[child_id] = child->hp;
  out.event.parameters = json{{"child_id", child_id},
                              {"hp_cost", before - actor->hp},
                              {"child_initial_hp", child->hp}};
  ++state.events_logged;
  sink.emit(out.event);
  state.record_birth(*child, ctx.round_index, ctx.phase, sink);

  if (actor->hp <= 0) {
    out.actor_died = true;
    state.record_death(*actor, DeathCause::reproduction_exhaustion, ctx.round_index, ctx.phase,
                       sink);
  }
  return out;
}

ActionOutcome resolve_communicate(WorldState& state, const SimulationConfig& cfg,
                                  const ActionRequest& req, const RoundContext& ctx,
                                  EventSink& sink) {
  if (req.recipients.empty()) return nullify(state, req, ctx, sink, "no recipients");
  if (static_cast<int>(req.message.size()) > cfg.message_max_length)
    return nullify(state, req, ctx, sink,
                   "message length " + std::to_string(req.message.size()) + " exceeds limit " +
                       std::to_string(cfg.message_max_length));
  for (const auto& r : req.recipients) {
    const AgentState* target = state.find_agent(r);
    if (!target || !target->alive)
      return nullify(state, req, ctx, sink, "recipient not alive: " + r);
  }

  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.targets = req.recipients;
  out.event.success = true;
  out.event.message = req.message;
  out.event.parameters = json{{"intent", to_string(req.intent)}};
  ++state.events_logged;
  sink.emit(out.event);
  return out;
}

ActionOutcome resolve_do_nothing(WorldState& state, const ActionRequest& req,
                                 const RoundContext& ctx, EventSink& sink) {
  ActionOutcome out;
  out.event = base_event(req, ctx);
  out.event.success = true;
  ++state.events_logged;
  sink.emit(out.event);
  return out;
}

ActionOutcome resolve_action(WorldState& state, const SimulationConfig& cfg,
                             const ActionRequest& req, const RoundContext& ctx,
                             RandomSource& random, EventSink& sink) {
  switch (req.kind) {
    case ActionKind::collect: return resolve_collect(state, cfg, req, ctx, sink);
    case ActionKind::allocate: return resolve_allocate(state, cfg, req, ctx, sink);
    case ActionKind::fight: return resolve_fight(state, cfg, req, ctx, random, sink);
    case ActionKind::rob: return resolve_rob(state, cfg, req, ctx, random, sink);
    case ActionKind::hunt: return resolve_hunt(state, cfg, req, ctx, random, sink);
    case ActionKind::reproduce: return resolve_reproduce(state, cfg, req, ctx, sink);
    case ActionKind::communicate: return resolve_communicate(state, cfg, req, ctx, sink);
    case ActionKind::do_nothing: return resolve_do_nothing(state, req, ctx, sink);
  }
  throw std::logic_error("bad ActionKind");
}

}  // namespace moralsim
