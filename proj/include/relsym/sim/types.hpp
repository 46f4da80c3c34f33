#pragma once

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relsym::sim {

// All lengths are centimeters, angles radians.

enum class BlockType { Short, Long };
enum class Side { Left, Center, Right };

using ObjectId = int;
inline constexpr ObjectId kTable = -1;

inline constexpr double kShortHalfX = 2.5;
inline constexpr double kLongHalfX = 12.5;
inline constexpr double kHalfY = 2.5;
inline constexpr double kHalfZ = 2.5;
inline constexpr double kSideOffset = 10.0;  // grasp/release offset for Left/Right

inline constexpr int kFeatureDim = 6;  // x, y, z, yaw, one-hot(short, long)

std::string to_string(BlockType t);
std::string to_string(Side s);
BlockType block_type_from_string(const std::string& s);
Side side_from_string(const std::string& s);

inline double side_offset(Side s) {
  switch (s) {
    case Side::Left: return -kSideOffset;
    case Side::Center: return 0.0;
    case Side::Right: return kSideOffset;
  }
  return 0.0;
}

struct ObjectFeature {
  double x = 0.0;
  double y = 0.0;
  double z = kHalfZ;
  double yaw = 0.0;
  BlockType type = BlockType::Short;

  double half_x() const { return type == BlockType::Long ? kLongHalfX : kShortHalfX; }
  double half_y() const { return kHalfY; }
  double top_z() const { return z + kHalfZ; }
  double bottom_z() const { return z - kHalfZ; }

  bool footprint_contains(double px, double py) const {
    return std::abs(px - x) <= half_x() && std::abs(py - y) <= half_y();
  }

  // [x, y, z, yaw, is_short, is_long]
  std::array<double, kFeatureDim> features() const {
    return {x, y, z, yaw, type == BlockType::Short ? 1.0 : 0.0,
            type == BlockType::Long ? 1.0 : 0.0};
  }

  bool operator==(const ObjectFeature&) const = default;
};

struct ActionSpec {
  ObjectId pick = 0;
  Side grasp = Side::Center;
  ObjectId place = 0;
  Side release = Side::Center;

  void validate() const {
    if (pick == place) throw std::invalid_argument("ActionSpec: pick == place");
  }

  bool operator==(const ActionSpec&) const = default;
};

struct WorldState {
  std::map<ObjectId, ObjectFeature> objects;
  std::map<ObjectId, ObjectId> support;  // object -> supporter, kTable for the table

  bool operator==(const WorldState&) const = default;
};

using ContactSet = std::set<std::pair<ObjectId, ObjectId>>;  // pairs stored (lo, hi)
using EffectVec = std::array<double, kFeatureDim>;

struct Transition {
  std::vector<ObjectId> ids;            // relevant objects, ascending
  std::vector<std::array<double, kFeatureDim>> pre;
  ActionSpec action;
  std::vector<std::array<double, kFeatureDim>> post;
  std::vector<EffectVec> effects;
  ContactSet contacts_pre;
  ContactSet contacts_post;
  // Episode bookkeeping so autoregressive evaluation can walk action sequences.
  int episode = 0;
  int step = 0;
};

struct SceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace relsym::sim
