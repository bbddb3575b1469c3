#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace moralsim {

enum class MoralType { universal, reciprocal, kin, selfish };

inline constexpr std::array<MoralType, 4> kAllMoralTypes = {
    MoralType::universal, MoralType::reciprocal, MoralType::kin, MoralType::selfish};

std::string to_string(MoralType t);
MoralType moral_type_from_string(std::string_view s);

enum class ActionKind { collect, hunt, reproduce, allocate, communicate, fight, rob, do_nothing };

inline constexpr std::array<ActionKind, 8> kAllActionKinds = {
    ActionKind::collect,     ActionKind::hunt,  ActionKind::reproduce, ActionKind::allocate,
    ActionKind::communicate, ActionKind::fight, ActionKind::rob,       ActionKind::do_nothing};

std::string to_string(ActionKind k);
ActionKind action_kind_from_string(std::string_view s);

// Non-action record kinds appearing in the event log alongside the eight actions.
inline constexpr std::string_view kEventKindEnvironment = "environment_update";
inline constexpr std::string_view kEventKindBirth = "birth";
inline constexpr std::string_view kEventKindDeath = "death";

enum class DeathCause {
  starvation,
  old_age,
  killed_in_fight,
  killed_in_rob,
  killed_by_prey,
  action_cost_exhaustion,
  reproduction_exhaustion,
};

std::string to_string(DeathCause c);

// Counter-attack damage dealt by prey on a failed hunt. A per-prey attribute;
// every spawned prey uses this default.
inline constexpr int kPreyCounterDamage = 4;

// Upper bound on the `thinking` field of a policy response, in words.
inline constexpr int kThinkingWordCap = 500;

// Serialized size cap for a single agent's long-term memory document.
inline constexpr std::size_t kMemoryCapBytes = 16 * 1024;

// Number of mandatory top-level sections in the long-term memory document.
inline constexpr int kMemorySectionCount = 5;

// Pre-abundance number of plant nodes in a fresh world (scaled by resource_abundance).
inline constexpr int kBasePlantNodes = 4;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace moralsim
