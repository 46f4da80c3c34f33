#pragma once

// Hand-crafted symbolic environment with known ground-truth operators, used to
// verify operator induction end to end.

#include <random>

#include "relsym/induce/operators.hpp"

namespace relsym::testenv {

inline constexpr int kHeads = 3;
inline constexpr int kBits = 1;

inline induce::LiftedOperator make_op(sim::Side grasp, sim::Side release, int n_vars,
                                      std::vector<std::vector<int>> unary,
                                      std::vector<std::tuple<int, int, int>> rel_ones,
                                      induce::LiftedEffects effects) {
  induce::LiftedOperator op;
  op.key.grasp = grasp;
  op.key.release = release;
  op.key.has_place = n_vars >= 2;
  op.key.n_vars = n_vars;
  op.key.unary = std::move(unary);
  op.key.rel.assign(kHeads, Eigen::MatrixXi::Zero(n_vars, n_vars));
  for (auto [h, u, v] : rel_ones) op.key.rel[std::size_t(h)](u, v) = 1;
  op.effects = std::move(effects);
  return op;
}

// Three operators with fully pinned precondition patterns.
inline std::vector<induce::LiftedOperator> ground_truth() {
  std::vector<induce::LiftedOperator> ops;
  // Flips the place object's bit and reverses the head-0 link.
  ops.push_back(make_op(sim::Side::Center, sim::Side::Center, 2, {{1}, {0}},
                        {{0, 0, 1}},
                        {{{1, 0, 0, 1}}, {{0, 0, 1, 1, 0}, {1, 1, 0, 0, 1}}}));
  // Consumes a self-mark on the pick object in a three-object context.
  ops.push_back(make_op(sim::Side::Left, sim::Side::Right, 3, {{0}, {0}, {1}},
                        {{2, 0, 0}, {2, 2, 2}, {0, 2, 1}},
                        {{}, {{2, 0, 0, 1, 0}}}));
  // A no-effect schema.
  ops.push_back(make_op(sim::Side::Right, sim::Side::Left, 2, {{1}, {1}}, {}, {}));
  return ops;
}

// Builds a grounded transition for `op` with the given object binding.
inline sym::SymbolicTransition ground_sample(const induce::LiftedOperator& op,
                                             const std::vector<sim::ObjectId>& binding) {
  sym::SymbolicTransition t;
  std::vector<sim::ObjectId> ids = binding;
  std::sort(ids.begin(), ids.end());
  const int n = op.key.n_vars;

  auto pos = [&](induce::VarId v) {
    return static_cast<int>(std::find(ids.begin(), ids.end(), binding[std::size_t(v)]) -
                            ids.begin());
  };

  t.pre.ids = ids;
  t.pre.unary.resize(std::size_t(n));
  for (int v = 0; v < n; ++v) t.pre.unary[std::size_t(pos(v))] = op.key.unary[std::size_t(v)];
  t.pre.rel.assign(kHeads, Eigen::MatrixXi::Zero(n, n));
  for (int h = 0; h < kHeads; ++h)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (op.key.rel[std::size_t(h)](u, v)) t.pre.rel[std::size_t(h)](pos(u), pos(v)) = 1;

  t.action.pick = binding[0];
  t.action.grasp = op.key.grasp;
  t.action.place = op.key.has_place ? binding[1] : binding[0] + 1000;  // off-record
  t.action.release = op.key.release;

  induce::Substitution theta;
  theta.to_object = binding;
  t.post = apply_operator(t.pre, op, theta);
  return t;
}

// Random dataset drawn from the ground-truth operators; `noise` is the chance
// a sample's post state gets one random bit flipped.
inline std::vector<sym::SymbolicTransition> sample_dataset(int count, std::uint64_t seed,
                                                           double noise = 0.0) {
  auto ops = ground_truth();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> op_pick(0, static_cast<int>(ops.size()) - 1);
  std::uniform_real_distribution<double> unit(0, 1);

  std::vector<sym::SymbolicTransition> out;
  out.reserve(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    const auto& op = ops[std::size_t(op_pick(rng))];
    std::vector<sim::ObjectId> pool{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<sim::ObjectId> binding(pool.begin(), pool.begin() + op.key.n_vars);
    sym::SymbolicTransition t = ground_sample(op, binding);
    if (noise > 0 && unit(rng) < noise) {
      const int n = static_cast<int>(t.post.ids.size());
      std::uniform_int_distribution<int> cell(0, kHeads * n * n + n * kBits - 1);
      int c = cell(rng);
      if (c < n * kBits) {
        t.post.unary[std::size_t(c / kBits)][std::size_t(c % kBits)] ^= 1;
      } else {
        c -= n * kBits;
        int h = c / (n * n), u = (c / n) % n, v = c % n;
        t.post.rel[std::size_t(h)](u, v) ^= 1;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Canonical form of an authored operator: run induction on one clean sample.
inline induce::LiftedOperator canonical_form(const induce::LiftedOperator& op) {
  std::vector<sim::ObjectId> binding;
  for (int v = 0; v < op.key.n_vars; ++v) binding.push_back(v);
  auto result = induce::induce_operators({ground_sample(op, binding)}, 1);
  return result.operators.front();
}

}  // namespace relsym::testenv
