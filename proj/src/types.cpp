#include "moralsim/types.hpp"

namespace moralsim {

std::string to_string(MoralType t) {
  switch (t) {
    case MoralType::universal: return "universal";
    case MoralType::reciprocal: return "reciprocal";
    case MoralType::kin: return "kin";
    case MoralType::selfish: return "selfish";
  }
  throw std::logic_error("bad MoralType");
}

MoralType moral_type_from_string(std::string_view s) {
  if (s == "universal") return MoralType::universal;
  if (s == "reciprocal") return MoralType::reciprocal;
  if (s == "kin") return MoralType::kin;
  if (s == "selfish") return MoralType::selfish;
  throw ValidationError("unknown moral type: " + std::string(s));
}

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::collect: return "collect";
    case ActionKind::hunt: return "hunt";
    case ActionKind::reproduce: return "reproduce";
    case ActionKind::allocate: return "allocate";
    case ActionKind::communicate: return "communicate";
    case ActionKind::fight: return "fight";
    case ActionKind::rob: return "rob";
    case ActionKind::do_nothing: return "do_nothing";
  }
  throw std::logic_error("bad ActionKind");
}

ActionKind action_kind_from_string(std::string_view s) {
  if (s == "collect") return ActionKind::collect;
  if (s == "hunt") return ActionKind::hunt;
  if (s == "reproduce") return ActionKind::reproduce;
  if (s == "allocate") return ActionKind::allocate;
  if (s == "communicate") return ActionKind::communicate;
  if (s == "fight") return ActionKind::fight;
  if (s == "rob") return ActionKind::rob;
  if (s == "do_nothing") return ActionKind::do_nothing;
  throw ValidationError("unknown action kind: " + std::string(s));
}

std::string to_string(DeathCause c) {
  switch (c) {
    case DeathCause::starvation: return "starvation";
    case DeathCause::old_age: return "old_age";
    case DeathCause::killed_in_fight: return "killed_in_fight";
    case DeathCause::killed_in_rob: return "killed_in_rob";
    case DeathCause::killed_by_prey: return "killed_by_prey";
    case DeathCause::action_cost_exhaustion: return "action_cost_exhaustion";
    case DeathCause::reproduction_exhaustion: return "reproduction_exhaustion";
  }
  throw std::logic_error("bad DeathCause");
}

}  // namespace moralsim
