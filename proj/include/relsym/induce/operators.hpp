#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relsym/sym/symbolic.hpp"

namespace relsym::induce {

// Variable indices: 0 is ?a (the pick argument), 1 is ?b (the place argument
// when present), further objects get ?c, ?d, ... in canonical order.
using VarId = int;

std::string var_name(VarId v);
std::optional<VarId> var_from_name(const std::string& name);

struct Substitution {
  std::vector<sim::ObjectId> to_object;  // index = VarId; injective

  int arity() const { return static_cast<int>(to_object.size()); }
};

// Canonical lifted precondition-plus-action pattern. Two grounded records that
// differ only by an object relabeling produce byte-identical keys.
struct LiftedKey {
  sim::Side grasp = sim::Side::Center;
  sim::Side release = sim::Side::Center;
  bool has_place = true;  // records may lack a place argument in synthetic envs
  int n_vars = 0;
  std::vector<std::vector<int>> unary;  // per var
  std::vector<Eigen::MatrixXi> rel;     // per head, n_vars x n_vars

  std::string serialize() const;
  bool operator==(const LiftedKey& o) const { return serialize() == o.serialize(); }
};

struct UnaryFlip {
  VarId var;
  int bit;
  int from, to;
  auto operator<=>(const UnaryFlip&) const = default;
};

struct RelFlip {
  int head;
  VarId src, dst;
  int from, to;
  auto operator<=>(const RelFlip&) const = default;
};

struct LiftedEffects {
  std::vector<UnaryFlip> unary;  // sorted
  std::vector<RelFlip> rel;      // sorted

  bool empty() const { return unary.empty() && rel.empty(); }
  std::string serialize() const;
  bool operator==(const LiftedEffects&) const = default;
};

struct LiftedOperator {
  LiftedKey key;
  LiftedEffects effects;
  int support = 0;
  double conflict_ratio = 1.0;
  std::string name_override;  // set when loaded from external text

  std::string name() const;  // action params plus a stable hash of the key
};

struct InapplicableOperator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal-key labeling. Residual ties between symmetric labelings are broken
// by the lifted post-state so isomorphic samples lift to identical effects.
std::pair<LiftedKey, Substitution> canonicalize(const sym::SymbolicTransition& t);

struct Group {
  LiftedKey key;
  std::vector<std::pair<int, Substitution>> members;  // sample index + binding
};

std::vector<Group> group_samples(const std::vector<sym::SymbolicTransition>& transitions);

struct EffectChoice {
  LiftedEffects effects;
  double conflict_ratio = 1.0;  // modal count / group size
};

EffectChoice lifted_effects(const Group& group,
                            const std::vector<sym::SymbolicTransition>& transitions);

struct InduceResult {
  std::vector<LiftedOperator> operators;  // descending support
  int skipped_oversize = 0;               // records beyond the variable cap
};

inline constexpr int kMaxVariables = 6;

InduceResult induce_operators(const std::vector<sym::SymbolicTransition>& transitions,
                              int min_support = 50);

// Grounded application with the frame assumption; throws InapplicableOperator
// when the grounded preconditions do not hold in `state`.
sym::SymbolicState apply_operator(const sym::SymbolicState& state, const LiftedOperator& op,
                                  const Substitution& theta);

std::uint64_t fnv1a64(const std::string& s);

void save_operators(const std::string& path, const std::vector<LiftedOperator>& ops);
std::vector<LiftedOperator> load_operators(const std::string& path);

}  // namespace relsym::induce
