#include "relsym/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace relsym::sim {

std::string to_string(BlockType t) { return t == BlockType::Short ? "short" : "long"; }

std::string to_string(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Center: return "center";
    case Side::Right: return "right";
  }
  return "center";
}

BlockType block_type_from_string(const std::string& s) {
  if (s == "short") return BlockType::Short;
  if (s == "long") return BlockType::Long;
  throw std::invalid_argument("unknown block type: " + s);
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "center") return Side::Center;
  if (s == "right") return Side::Right;
  throw std::invalid_argument("unknown side: " + s);
}

namespace {

constexpr double kPlacementRange = 45.0;  // scene generation draws centers in [-45, 45]
constexpr int kPlacementAttempts = 200;
constexpr double kEps = 1e-9;

bool footprints_overlap(const ObjectFeature& a, const ObjectFeature& b) {
  return std::abs(a.x - b.x) < a.half_x() + b.half_x() - kEps &&
         std::abs(a.y - b.y) < a.half_y() + b.half_y() - kEps;
}

// All objects resting (transitively) on root, excluding root itself.
std::set<ObjectId> supported_closure(const WorldState& state, ObjectId root) {
  std::set<ObjectId> out;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [id, sup] : state.support) {
      if (out.count(id)) continue;
      if (sup == root || out.count(sup)) {
        out.insert(id);
        grew = true;
      }
    }
  }
  return out;
}

// Highest resting surface under (px, py) among candidates; kTable if none.
struct Surface {
  ObjectId id = kTable;
  double top = 0.0;
};

Surface find_surface(const WorldState& state, double px, double py,
                     const std::set<ObjectId>& excluded, double max_top) {
  Surface best;
  for (const auto& [id, obj] : state.objects) {
    if (excluded.count(id)) continue;
    if (!obj.footprint_contains(px, py)) continue;
    if (obj.top_z() > max_top + kEps) continue;
    if (obj.top_z() > best.top + kEps ||
        (std::abs(obj.top_z() - best.top) <= kEps && best.id != kTable && id < best.id)) {
      best.id = id;
      best.top = obj.top_z();
    }
  }
  return best;
}

void translate(WorldState& state, const std::set<ObjectId>& ids, double dx, double dy,
               double dz) {
  for (ObjectId id : ids) {
    auto& o = state.objects.at(id);
    o.x += dx;
    o.y += dy;
    o.z += dz;
  }
}

}  // namespace

WorldState init_scene(int n_objects, std::uint64_t seed) {
  if (n_objects < 1) throw ContractViolation("init_scene: n_objects must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-kPlacementRange, kPlacementRange);
  std::uniform_int_distribution<int> type_pick(0, 1);

  WorldState state;
  for (ObjectId id = 0; id < n_objects; ++id) {
    ObjectFeature obj;
    obj.type = type_pick(rng) == 0 ? BlockType::Short : BlockType::Long;
    obj.z = kHalfZ;
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      obj.x = coord(rng);
      obj.y = coord(rng);
      placed = std::none_of(state.objects.begin(), state.objects.end(),
                            [&](const auto& kv) { return footprints_overlap(obj, kv.second); });
    }
    if (!placed)
      throw SceneError("init_scene: no collision-free position for object " +
                       std::to_string(id));
    state.objects[id] = obj;
    state.support[id] = kTable;
  }
  return state;
}

ActionResolution resolve_action(const WorldState& state, const ActionSpec& action) {
  action.validate();
  if (!state.objects.count(action.pick) || !state.objects.count(action.place))
    throw ContractViolation("resolve_action: unknown object id");

  ActionResolution res;
  res.next = state;

  const ObjectFeature& pick = state.objects.at(action.pick);
  const double grasp_delta = side_offset(action.grasp);
  if (std::abs(grasp_delta) > pick.half_x() + kEps) return res;  // missed grasp

  // Gripper-attached set: a center grasp lifts the whole stack above the pick
  // object; an off-center grasp lifts only the block and sheds its cargo.
  res.carried = action.grasp == Side::Center ? supported_closure(state, action.pick)
                                             : std::set<ObjectId>{};
  res.carried.insert(action.pick);
  if (res.carried.count(action.place)) {
    res.carried.clear();
    return res;  // placing onto something in the gripper: no-op
  }

  WorldState& next = res.next;
  if (action.grasp != Side::Center) {
    // Shed cargo: each directly supported substack falls straight down.
    std::vector<ObjectId> children;
    for (const auto& [id, sup] : state.support)
      if (sup == action.pick) children.push_back(id);
    for (ObjectId child : children) {
      std::set<ObjectId> stack = supported_closure(next, child);
      stack.insert(child);
      std::set<ObjectId> excluded = stack;
      excluded.insert(action.pick);
      const ObjectFeature& c = next.objects.at(child);
      Surface s = find_surface(next, c.x, c.y, excluded, c.bottom_z());
      double dz = (s.top + kHalfZ) - c.z;
      translate(next, stack, 0.0, 0.0, dz);
      next.support[child] = s.id;
      res.dropped.insert(stack.begin(), stack.end());
    }
  }

  // Landing point: place object's top-face center shifted along its long axis.
  const ObjectFeature& place = next.objects.at(action.place);
  const double lx = place.x + side_offset(action.release);
  const double ly = place.y;

  Surface surf = find_surface(next, lx, ly, res.carried,
                              std::numeric_limits<double>::infinity());

  const double gx = pick.x + grasp_delta;
  const double gy = pick.y;
  res.arm_dx = lx - gx;
  res.arm_dy = ly - gy;
  const double dz = (surf.top + kHalfZ) - next.objects.at(action.pick).z;
  translate(next, res.carried, res.arm_dx, res.arm_dy, dz);
  next.support[action.pick] = surf.id;
  res.moved = true;
  return res;
}

WorldState apply_action(const WorldState& state, const ActionSpec& action) {
  return resolve_action(state, action).next;
}

ContactSet contact_graph(const WorldState& state) {
  ContactSet contacts;
  for (const auto& [id, sup] : state.support)
    if (sup != kTable) contacts.insert({std::min(id, sup), std::max(id, sup)});
  return contacts;
}

std::vector<EffectVec> effect_of(const WorldState& pre, const WorldState& post,
                                 const ActionSpec& action) {
  if (pre.objects.size() != post.objects.size())
    throw ContractViolation("effect_of: object sets differ");
  for (const auto& [id, obj] : pre.objects)
    if (!post.objects.count(id)) throw ContractViolation("effect_of: object sets differ");

  ActionResolution res = resolve_action(pre, action);
  std::vector<EffectVec> effects;
  effects.reserve(pre.objects.size());
  for (const auto& [id, obj] : pre.objects) {
    auto fpre = obj.features();
    auto fpost = post.objects.at(id).features();
    EffectVec e;
    for (int d = 0; d < kFeatureDim; ++d) e[d] = fpost[d] - fpre[d];
    if (res.moved && res.carried.count(id)) {
      e[0] -= res.arm_dx;
      e[1] -= res.arm_dy;
    }
    effects.push_back(e);
  }
  return effects;
}

std::set<ObjectId> relevant_objects(const WorldState& pre, const ActionSpec& action) {
  std::set<ObjectId> out{action.pick, action.place};
  for (const auto& [a, b] : contact_graph(pre)) {
    if (a == action.pick || a == action.place) out.insert(b);
    if (b == action.pick || b == action.place) out.insert(a);
  }
  return out;
}

}  // namespace relsym::sim
