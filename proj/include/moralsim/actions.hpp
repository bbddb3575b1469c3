#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moralsim/config.hpp"
#include "moralsim/world.hpp"

namespace moralsim {

enum class MessageIntent { general, collaboration_invite };

std::string to_string(MessageIntent i);
MessageIntent message_intent_from_string(std::string_view s);

struct ActionRequest {
  std::string actor_id;
  ActionKind kind = ActionKind::do_nothing;
  std::optional<std::string> target_id;             // collect/hunt/fight/rob
  std::map<std::string, int> allocation_plan;       // allocate
  int requested_quantity = 0;                       // collect q_req / rob h_req
  std::string message;                              // communicate
  std::vector<std::string> recipients;              // communicate
  MessageIntent intent = MessageIntent::general;    // communicate

  nlohmann::json to_json() const;
  static ActionRequest from_json(const nlohmann::json& j);
};

struct ActionOutcome {
  EventRecord event;
  bool nullified = false;
  bool actor_died = false;
  bool target_died = false;
  bool prey_killed = false;
  bool reward_granted = false;
};

// Clipped success function: min(max((0.5 + intercept) + 0.4*tanh(delta_pa/slope), 0.1), 0.9).
// Throws std::domain_error when slope == 0.
double success_probability(double delta_pa, double intercept, double slope);

// Context for one resolution: which round the action executes in (for the event record).
struct RoundContext {
  int step = 0;
  int round_index = 0;
  std::string phase;  // "social" | "production"
};

// Each resolver applies the final (layer-3) validity checks itself; an invalid
// request yields a nullified outcome (logged, zero cost, no draws consumed).
// Probabilistic actions draw from `random` only after the initiation cost has
// been paid and only if the actor survived paying it.
ActionOutcome resolve_collect(WorldState& state, const SimulationConfig& cfg,
                              const ActionRequest& req, const RoundContext& ctx, EventSink& sink);
ActionOutcome resolve_allocate(WorldState& state, const SimulationConfig& cfg,
                               const ActionRequest& req, const RoundContext& ctx, EventSink& sink);
ActionOutcome resolve_fight(WorldState& state, const SimulationConfig& cfg,
                            const ActionRequest& req, const RoundContext& ctx,
                            RandomSource& random, EventSink& sink);
ActionOutcome resolve_rob(WorldState& state, const SimulationConfig& cfg, const ActionRequest& req,
                          const RoundContext& ctx, RandomSource& random, EventSink& sink);
ActionOutcome resolve_hunt(WorldState& state, const SimulationConfig& cfg,
                           const ActionRequest& req, const RoundContext& ctx,
                           RandomSource& random, EventSink& sink);
ActionOutcome resolve_reproduce(WorldState& state, const SimulationConfig& cfg,
                                const ActionRequest& req, const RoundContext& ctx,
                                EventSink& sink);
ActionOutcome resolve_communicate(WorldState& state, const SimulationConfig& cfg,
                                  const ActionRequest& req, const RoundContext& ctx,
                                  EventSink& sink);
ActionOutcome resolve_do_nothing(WorldState& state, const ActionRequest& req,
                                 const RoundContext& ctx, EventSink& sink);

// Dispatch on req.kind. `random` feeds fight/rob/hunt Bernoulli draws; reproduce
// draws the child's physical ability from the world's own stream.
ActionOutcome resolve_action(WorldState& state, const SimulationConfig& cfg,
                             const ActionRequest& req, const RoundContext& ctx,
                             RandomSource& random, EventSink& sink);

std::vector<ActionKind> legal_actions_for(bool social_round);

}  // namespace moralsim
