// Acceptance suite: one pass/fail line per criterion, nonzero exit on failures.

#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "../gradcheck_util.hpp"
#include "../oracle_env.hpp"
#include "relsym/induce/operators.hpp"
#include "relsym/net/train.hpp"
#include "relsym/pddl/pddl.hpp"
#include "relsym/plan/harness.hpp"
#include "relsym/sim/dataset.hpp"
#include "relsym/sym/symbolic.hpp"

using namespace relsym;

namespace {

double now_s() {
  static auto t0 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Shared {
  sim::SplitView split;
  net::TrainNet relational0;                      // desk-scale relational model, seed 0
  bool model_ready = false;
  std::vector<induce::LiftedOperator> operators;  // induced from the training slice
  int min_support = 50;
  double desk_timeout_s = 10.0;
  double desk_tol_cm = 5.0;
};

constexpr int kDeskTrain = 20000, kDeskVal = 2500, kDeskTest = 2500, kDeskEpochs = 200;

net::NetConfig desk_net_config(net::AttentionMode mode) {
  net::NetConfig nc;
  nc.attention = mode;
  return nc;
}

// --- criterion 1: gradient correctness --------------------------------------

Outcome criterion1() {
  auto stats = gradcheck::run(gradcheck::toy_config(), 101);
  std::ostringstream d;
  d << "checked " << stats.checked << " scalars, worst scalar rel err " << stats.worst
    << " (" << (stats.worst_tensor.empty() ? "-" : stats.worst_tensor)
    << "), worst tensor rel err " << stats.worst_tensor_rel;
  return {stats.worst < 1e-4 && stats.worst_tensor_rel < 1e-4, d.str()};
}

// --- criterion 2: ablation ordering over three seeds ------------------------

Outcome criterion2(Shared& shared) {
  sim::CollectOptions opts;
  opts.n_samples = kDeskTrain + kDeskVal + kDeskTest;
  opts.seed = 42;
  shared.split = sim::split_dataset(sim::collect_dataset(opts), kDeskTrain, kDeskVal,
                                    kDeskTest);

  auto run_one = [&](net::AttentionMode mode, std::uint64_t seed) {
    net::TrainConfig tc;
    tc.epochs = kDeskEpochs;
    tc.seed = seed;
    net::TrainResult r = net::train(shared.split.train, shared.split.val,
                                    desk_net_config(mode), tc);
    double test = net::evaluate_mse(r.net, shared.split.test);
    if (mode == net::AttentionMode::Relational && seed == 0) {
      shared.relational0 = r.net;
      shared.model_ready = true;
    }
    return test;
  };

  double rel_total = 0, ones_total = 0;
  std::ostringstream d;
  d << "test MSE cm^2, relational {";
  for (std::uint64_t seed : {0, 1, 2}) {
    double v = run_one(net::AttentionMode::Relational, seed);
    rel_total += v;
    d << " " << v;
  }
  d << " } vs all-ones {";
  for (std::uint64_t seed : {0, 1, 2}) {
    double v = run_one(net::AttentionMode::AllOnes, seed);
    ones_total += v;
    d << " " << v;
  }
  d << " }, means " << rel_total / 3 << " vs " << ones_total / 3;
  return {rel_total / 3 < ones_total / 3, d.str()};
}

// --- criterion 3: operator induction on the hand-crafted environment --------

Outcome criterion3() {
  auto data = testenv::sample_dataset(1000, 29);
  auto result = induce::induce_operators(data, 5);

  std::set<std::string> expected, got;
  for (const auto& op : testenv::ground_truth()) {
    auto canon = testenv::canonical_form(op);
    expected.insert(canon.key.serialize() + "//" + canon.effects.serialize());
  }
  for (const auto& op : result.operators)
    got.insert(op.key.serialize() + "//" + op.effects.serialize());

  std::ostringstream d;
  d << result.operators.size() << " operators induced from 1000 transitions, "
    << (got == expected ? "exact match with ground truth" : "mismatch with ground truth");
  return {got == expected && result.operators.size() == 3, d.str()};
}

// --- criterion 4: held-out symbolic-transition fidelity ---------------------

Outcome criterion4(Shared& shared) {
  if (!shared.model_ready) return {false, "no trained model (criterion 2 did not run)"};
  auto symbolic = sym::symbolize_dataset(shared.relational0, shared.split.train);
  auto induced = induce::induce_operators(symbolic, shared.min_support);
  shared.operators = induced.operators;

  auto held = sym::symbolize_dataset(shared.relational0, shared.split.test);
  std::map<std::string, const induce::LiftedOperator*> by_key;
  for (const auto& op : shared.operators) by_key[op.key.serialize()] = &op;

  int checked = 0, agree = 0;
  for (const auto& st : held) {
    if (static_cast<int>(st.pre.ids.size()) > induce::kMaxVariables) continue;
    auto [key, theta] = induce::canonicalize(st);
    auto it = by_key.find(key.serialize());
    if (it == by_key.end()) continue;
    ++checked;
    if (induce::apply_operator(st.pre, *it->second, theta) == st.post) ++agree;
    if (checked == 500) break;
  }
  std::ostringstream d;
  d << shared.operators.size() << " operators (min_support " << shared.min_support
    << "); post-state reproduced on " << agree << "/" << checked << " held-out transitions";
  return {checked == 500 && agree >= static_cast<int>(0.95 * checked), d.str()};
}

// --- criterion 5: PDDL round trip -------------------------------------------

Outcome criterion5(const Shared& shared) {
  if (shared.operators.empty()) return {false, "no induced operators available"};
  std::string text = pddl::emit_domain(shared.operators);
  bool stable = pddl::emit_domain(shared.operators) == text;
  auto parsed = pddl::parse_domain(text);

  bool equal = parsed.size() == shared.operators.size();
  for (std::size_t i = 0; equal && i < parsed.size(); ++i)
    equal = parsed[i].key == shared.operators[i].key &&
            parsed[i].effects == shared.operators[i].effects &&
            parsed[i].name() == shared.operators[i].name();

  std::ostringstream d;
  d << parsed.size() << " schemas, " << (equal ? "structurally equal after parse" : "MISMATCH")
    << ", emission " << (stable ? "byte-stable" : "UNSTABLE");
  return {equal && stable, d.str()};
}

// --- criterion 6: A* optimality against breadth-first search ----------------

bool bfs_applicable(const plan::AtomSet& state, const plan::GroundAction& a) {
  for (plan::AtomCode c : a.pre)
    if (!std::binary_search(state.begin(), state.end(), c)) return false;
  return true;
}

plan::AtomSet bfs_apply(const plan::AtomSet& state, const plan::GroundAction& a) {
  std::set<plan::AtomCode> s(state.begin(), state.end());
  for (plan::AtomCode c : a.del) s.erase(c);
  for (plan::AtomCode c : a.add) s.insert(c);
  return plan::AtomSet(s.begin(), s.end());
}

int bfs_optimal(const plan::AtomSet& init, const plan::AtomSet& goal,
                const std::vector<plan::GroundAction>& actions, int max_depth) {
  auto satisfied = [&](const plan::AtomSet& state) {
    for (plan::AtomCode c : goal)
      if (!std::binary_search(state.begin(), state.end(), c)) return false;
    return true;
  };
  if (satisfied(init)) return 0;
  std::set<plan::AtomSet> seen{init};
  std::vector<std::pair<plan::AtomSet, int>> queue{{init, 0}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    auto [state, depth] = queue[q];
    if (depth >= max_depth) continue;
    for (const auto& a : actions) {
      if (!bfs_applicable(state, a)) continue;
      plan::AtomSet next = bfs_apply(state, a);
      if (satisfied(next)) return depth + 1;
      if (seen.insert(next).second) queue.push_back({next, depth + 1});
    }
  }
  return -1;
}

Outcome criterion6() {
  auto data = testenv::sample_dataset(600, 3);
  auto ops = induce::induce_operators(data, 5).operators;
  std::vector<sim::ObjectId> objects{0, 1, 2, 3, 4};
  auto actions = plan::ground(ops, objects);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> bit(0, 1), coin(0, 3), walk_len(1, 6);
  int tested = 0, optimal = 0, valid = 0;
  while (tested < 25) {
    sym::SymbolicState world;
    world.ids = objects;
    world.unary.assign(5, {0});
    for (auto& u : world.unary) u[0] = bit(rng);
    world.rel.assign(testenv::kHeads, Eigen::MatrixXi::Zero(5, 5));
    for (auto& m : world.rel)
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = coin(rng) == 0 ? 1 : 0;

    plan::AtomSet init = plan::state_atoms(world);
    plan::AtomSet cur = init;
    int target = walk_len(rng);
    for (int s = 0; s < target; ++s) {
      std::vector<const plan::GroundAction*> applicable;
      for (const auto& a : actions)
        if (bfs_applicable(cur, a)) applicable.push_back(&a);
      if (applicable.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, applicable.size() - 1);
      cur = bfs_apply(cur, *applicable[pick(rng)]);
    }
    if (cur == init) continue;
    int optimum = bfs_optimal(init, cur, actions, 6);
    if (optimum < 1) continue;

    plan::Plan result = plan::search(init, cur, actions, 10.0);
    if (result.status != plan::PlanStatus::Found) continue;
    ++tested;
    if (static_cast<int>(result.steps.size()) == optimum) ++optimal;
    if (plan::symbolically_valid(result, init, cur)) ++valid;
  }
  std::ostringstream d;
  d << optimal << "/25 match the BFS optimum, " << valid << "/25 pass step validity";
  return {optimal == 25 && valid == 25, d.str()};
}

// --- criterion 7: end-to-end planning sweep ----------------------------------

Outcome criterion7(const Shared& shared) {
  if (!shared.model_ready || shared.operators.empty())
    return {false, "missing model or operators"};
  plan::EvalReport report = plan::run_planning_eval(
      shared.relational0, shared.operators, {2, 3, 4}, 100, 3, shared.desk_timeout_s,
      shared.desk_tol_cm, 20240);

  std::ostringstream d;
  bool pass = true;
  for (int n : {2, 3, 4}) {
    double rate = report.success_rate(n);
    d << n << " objects: " << static_cast<int>(rate * 100 + 0.5) << "%  ";
    if (rate < 0.80) pass = false;
  }
  return {pass, d.str()};
}

// --- criterion 8: generalization to eight objects ----------------------------

Outcome criterion8(const Shared& shared) {
  if (!shared.model_ready || shared.operators.empty())
    return {false, "missing model or operators"};
  std::vector<sim::ObjectId> objects{0, 1, 2, 3, 4, 5, 6, 7};
  auto actions = plan::ground(shared.operators, objects);

  const double budget_s = 55.0;
  const double t0 = now_s();
  int attempts = 0;
  for (int p = 0; p < 60 && now_s() - t0 < budget_s; ++p) {
    int n_act = 1 + p % 2;
    auto pairs = plan::make_problem_pairs(1, 8, n_act, 31000 + std::uint64_t(p) * 101);
    ++attempts;
    plan::PairOutcome outcome = plan::solve_pair(shared.relational0, actions, pairs.front(),
                                                 shared.desk_timeout_s, shared.desk_tol_cm);
    if (outcome.validated) {
      std::ostringstream d;
      d << "pair " << p << " solved with " << outcome.plan_length
        << " steps and replay-validated (max err " << outcome.max_err_cm << " cm, "
        << attempts << " pairs tried)";
      return {true, d.str()};
    }
  }
  return {false, "no 8-object pair validated within the budget (" +
                     std::to_string(attempts) + " tried)"};
}

// --- criterion 9: no-op schema presence --------------------------------------

Outcome criterion9(const Shared& shared) {
  if (!shared.model_ready || shared.operators.empty())
    return {false, "missing model or operators"};

  // Unary signatures of short blocks across the table.
  std::set<std::vector<int>> short_bits;
  for (double x : {-30.0, 0.0, 30.0})
    for (double y : {-30.0, 0.0, 30.0}) {
      sim::ObjectFeature f{x, y, sim::kHalfZ, 0, sim::BlockType::Short};
      std::vector<std::array<double, 6>> feats{f.features()};
      short_bits.insert(net::encode_unary(shared.relational0, feats)[0]);
    }

  for (const auto& op : shared.operators) {
    if (!op.effects.empty()) continue;
    if (op.key.grasp != sim::Side::Left && op.key.grasp != sim::Side::Right) continue;
    if (op.support < shared.min_support) continue;
    if (short_bits.count(op.key.unary[0])) {
      std::ostringstream d;
      d << "empty-effect schema " << op.name() << " with support " << op.support;
      return {true, d.str()};
    }
  }
  return {false, "no empty-effect side-grasp schema with a short-compatible pick"};
}

}  // namespace

int main() {
  Shared shared;
  struct Budget {
    double seconds;  // 0 = no stated budget
  };
  const std::map<int, Budget> budgets{{1, {60}}, {2, {1200}}, {3, {10}}, {4, {60}},
                                      {5, {0}},  {6, {120}},  {7, {0}},  {8, {60}},
                                      {9, {0}}};

  int failures = 0;
  const char* names[] = {"",
                         "gradient correctness",
                         "ablation ordering",
                         "operator-induction oracle",
                         "symbolic-transition fidelity",
                         "PDDL round-trip",
                         "planner optimality at shallow depth",
                         "end-to-end planning",
                         "eight-object generalization",
                         "no-op schema presence"};

  auto run = [&](int id, auto&& fn) {
    double t0 = now_s();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    double secs = now_s() - t0;
    double budget = budgets.at(id).seconds;
    bool in_budget = budget <= 0 || secs <= budget;
    bool pass = outcome.pass && in_budget;
    std::printf("%s criterion %d (%s): %s [%.1fs%s]\n", pass ? "PASS" : "FAIL", id,
                names[id], outcome.detail.c_str(), secs,
                !in_budget ? ", over budget" : "");
    std::fflush(stdout);
    if (!pass) ++failures;
  };

  run(1, [&] { return criterion1(); });
  run(2, [&] { return criterion2(shared); });
  run(3, [&] { return criterion3(); });
  run(4, [&] { return criterion4(shared); });
  run(5, [&] { return criterion5(shared); });
  run(6, [&] { return criterion6(); });
  run(7, [&] { return criterion7(shared); });
  run(8, [&] { return criterion8(shared); });
  run(9, [&] { return criterion9(shared); });

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
