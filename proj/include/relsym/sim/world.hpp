#pragma once

#include <cstdint>

#include "relsym/sim/types.hpp"

namespace relsym::sim {

// Resolved semantics of one pick-place action on a state.
struct ActionResolution {
  bool moved = false;                 // false: the action was a no-op
  std::set<ObjectId> carried;         // objects attached to the gripper
  std::set<ObjectId> dropped;         // objects that slid off an off-center carry
  double arm_dx = 0.0, arm_dy = 0.0;  // landing point minus grasp point
  WorldState next;
};

WorldState init_scene(int n_objects, std::uint64_t seed);

ActionResolution resolve_action(const WorldState& state, const ActionSpec& action);

WorldState apply_action(const WorldState& state, const ActionSpec& action);

ContactSet contact_graph(const WorldState& state);

// Per-object feature difference post - pre, with the arm's horizontal carry
// displacement subtracted for gripper-attached objects. Order follows ids.
std::vector<EffectVec> effect_of(const WorldState& pre, const WorldState& post,
                                 const ActionSpec& action);

// Objects an action touches: its arguments plus their pre-state contact partners.
std::set<ObjectId> relevant_objects(const WorldState& pre, const ActionSpec& action);

}  // namespace relsym::sim
