#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "moralsim/actions.hpp"
#include "moralsim/config.hpp"
#include "moralsim/world.hpp"

namespace moralsim {

struct RoundPhase {
  int step = 0;
  int round_index = 0;  // [0, social_rounds_per_step]; the last round is production
  bool social = true;
  std::vector<ActionKind> legal_actions;

  std::string kind_name() const { return social ? "social" : "production"; }
};

RoundPhase make_phase(const SimulationConfig& cfg, int step, int round_index);

// Everything a policy sees for one decision. Serializes deterministically.
struct ObservationBundle {
  std::string agent_id;
  RoundPhase phase;
  nlohmann::json self_status;
  nlohmann::json environment_status;
  nlohmann::json other_agents;
  nlohmann::json recent_history;
  nlohmann::json memory_doc;
  nlohmann::json short_term_plan;

  nlohmann::json to_json() const;
};

struct PolicyResponse {
  std::string agent_id;
  std::string thinking;
  nlohmann::json long_term_memory;
  nlohmann::json short_term_plan;
  ActionRequest action;

  nlohmann::json to_json() const;
  // Layer-1: schema parse. Throws ValidationError with a human-readable message.
  static PolicyResponse from_json(const nlohmann::json& j);
};

// Layer-1 structural checks beyond field presence: memory sections, enums, word cap.
// Returns the list of violations (empty when valid).
std::vector<std::string> validate_response_schema(const PolicyResponse& resp);

// Layer-2 contextual checks against live state (target existence, HP sufficiency,
// phase legality, memory cap, message lint).
std::vector<std::string> validate_response_context(const PolicyResponse& resp,
                                                   const WorldState& state,
                                                   const SimulationConfig& cfg,
                                                   const RoundPhase& phase);

// Raised by backends once their retry budget is exhausted; the engine substitutes
// do_nothing and the run continues.
class DecisionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyBackend {
  virtual ~PolicyBackend() = default;
  virtual PolicyResponse decide(const ObservationBundle& bundle) = 0;
  virtual std::string name() const = 0;
};

// Recent-event window the engine maintains for perception assembly.
class EventWindow final : public EventSink {
 public:
  explicit EventWindow(int window_steps) : window_steps_(window_steps) {}
  void emit(const EventRecord& ev) override { events_.push_back(ev); }
  void trim(int current_step);
  const std::deque<EventRecord>& events() const { return events_; }

 private:
  int window_steps_;
  std::deque<EventRecord> events_;
};

ObservationBundle assemble_observation(const WorldState& state, const SimulationConfig& cfg,
                                       const std::string& agent_id, const RoundPhase& phase,
                                       const EventWindow& window);

// Deterministic rule-based backend for one moral type. Rules are documented in
// docs/scripted_policies.md and are seed-independent.
std::unique_ptr<PolicyBackend> make_scripted_policy(MoralType type);

// Dispatches to a per-type scripted policy based on the observed self status.
std::unique_ptr<PolicyBackend> make_scripted_router();

}  // namespace moralsim
