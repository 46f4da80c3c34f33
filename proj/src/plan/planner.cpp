#include "relsym/plan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <queue>
#include <random>
#include <unordered_map>

namespace relsym::plan {

namespace {

constexpr std::uint64_t kRelTag = 1ull << 62;

bool subset_of(const AtomSet& needle, const AtomSet& hay) {
  return std::includes(hay.begin(), hay.end(), needle.begin(), needle.end());
}

AtomSet strips_apply(const AtomSet& state, const GroundAction& a) {
  AtomSet next;
  next.reserve(state.size() + a.add.size());
  std::set_difference(state.begin(), state.end(), a.del.begin(), a.del.end(),
                      std::back_inserter(next));
  AtomSet merged;
  merged.reserve(next.size() + a.add.size());
  std::set_union(next.begin(), next.end(), a.add.begin(), a.add.end(),
                 std::back_inserter(merged));
  return merged;
}

int unsatisfied(const AtomSet& goal, const AtomSet& state) {
  int count = 0;
  auto it = state.begin();
  for (AtomCode g : goal) {
    it = std::lower_bound(it, state.end(), g);
    if (it == state.end() || *it != g) ++count;
  }
  return count;
}

struct VectorHash {
  std::size_t operator()(const AtomSet& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (AtomCode c : v) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

AtomCode unary_atom(int bit, int value, sim::ObjectId obj) {
  return (static_cast<std::uint64_t>(bit * 2 + value) << 20) |
         static_cast<std::uint64_t>(obj + 1);
}

AtomCode rel_atom(int head, sim::ObjectId src, sim::ObjectId dst) {
  return kRelTag | (static_cast<std::uint64_t>(head) << 40) |
         (static_cast<std::uint64_t>(src + 1) << 20) | static_cast<std::uint64_t>(dst + 1);
}

AtomSet state_atoms(const sym::SymbolicState& s) {
  AtomSet atoms;
  for (std::size_t i = 0; i < s.ids.size(); ++i)
    for (std::size_t b = 0; b < s.unary[i].size(); ++b)
      atoms.push_back(unary_atom(static_cast<int>(b), s.unary[i][b], s.ids[i]));
  for (std::size_t h = 0; h < s.rel.size(); ++h)
    for (Eigen::Index i = 0; i < s.rel[h].rows(); ++i)
      for (Eigen::Index j = 0; j < s.rel[h].cols(); ++j)
        if (s.rel[h](i, j))
          atoms.push_back(rel_atom(static_cast<int>(h), s.ids[std::size_t(i)],
                                   s.ids[std::size_t(j)]));
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

AtomSet goal_atoms(const sym::SymbolicState& goal, const sim::ContactSet& goal_contacts) {
  AtomSet atoms;
  for (std::size_t i = 0; i < goal.ids.size(); ++i)
    for (std::size_t b = 0; b < goal.unary[i].size(); ++b)
      atoms.push_back(unary_atom(static_cast<int>(b), goal.unary[i][b], goal.ids[i]));
  for (std::size_t h = 0; h < goal.rel.size(); ++h)
    for (Eigen::Index i = 0; i < goal.rel[h].rows(); ++i)
      for (Eigen::Index j = 0; j < goal.rel[h].cols(); ++j) {
        if (!goal.rel[h](i, j)) continue;
        sim::ObjectId a = goal.ids[std::size_t(i)], b = goal.ids[std::size_t(j)];
        if (!goal_contacts.count({std::min(a, b), std::max(a, b)})) continue;
        atoms.push_back(rel_atom(static_cast<int>(h), a, b));
      }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

sim::ActionSpec GroundAction::action_spec() const {
  if (!op || !op->key.has_place || theta.arity() < 2)
    throw InvalidPlan("ground action has no executable place argument");
  sim::ActionSpec a;
  a.pick = theta.to_object[0];
  a.place = theta.to_object[1];
  a.grasp = op->key.grasp;
  a.release = op->key.release;
  return a;
}

std::vector<GroundAction> ground(const std::vector<induce::LiftedOperator>& ops,
                                 const std::vector<sim::ObjectId>& objects) {
  std::vector<GroundAction> out;
  for (const auto& op : ops) {
    const int arity = op.key.n_vars;
    if (arity > static_cast<int>(objects.size())) continue;
    std::vector<sim::ObjectId> binding;
    std::vector<bool> used(objects.size(), false);

    auto emit = [&]() {
      GroundAction ga;
      ga.op = &op;
      ga.theta.to_object = binding;
      for (int v = 0; v < arity; ++v)
        for (std::size_t b = 0; b < op.key.unary[std::size_t(v)].size(); ++b)
          ga.pre.push_back(unary_atom(static_cast<int>(b),
                                      op.key.unary[std::size_t(v)][b], binding[std::size_t(v)]));
      for (std::size_t h = 0; h < op.key.rel.size(); ++h)
        for (int u = 0; u < arity; ++u)
          for (int v = 0; v < arity; ++v)
            if (op.key.rel[h](u, v))
              ga.pre.push_back(rel_atom(static_cast<int>(h), binding[std::size_t(u)],
                                        binding[std::size_t(v)]));
      for (const auto& f : op.effects.unary) {
        ga.add.push_back(unary_atom(f.bit, f.to, binding[std::size_t(f.var)]));
        ga.del.push_back(unary_atom(f.bit, f.from, binding[std::size_t(f.var)]));
      }
      for (const auto& f : op.effects.rel) {
        AtomCode atom = rel_atom(f.head, binding[std::size_t(f.src)], binding[std::size_t(f.dst)]);
        (f.to ? ga.add : ga.del).push_back(atom);
      }
      std::sort(ga.pre.begin(), ga.pre.end());
      std::sort(ga.add.begin(), ga.add.end());
      std::sort(ga.del.begin(), ga.del.end());
      out.push_back(std::move(ga));
    };

    auto recurse = [&](auto&& self, int depth) -> void {
      if (depth == arity) {
        emit();
        return;
      }
      for (std::size_t i = 0; i < objects.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        binding.push_back(objects[i]);
        self(self, depth + 1);
        binding.pop_back();
        used[i] = false;
      }
    };
    recurse(recurse, 0);
  }
  return out;
}

Plan search(const AtomSet& init, const AtomSet& goal, const std::vector<GroundAction>& actions,
            double timeout_s) {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + std::chrono::duration<double>(timeout_s);

  struct Node {
    int id;
    int parent;
    int action;  // index into `actions`
    int g;
  };
  struct Entry {
    int f;
    long order;
    int node;
    bool operator>(const Entry& o) const {
      return f != o.f ? f > o.f : order > o.order;
    }
  };

  std::vector<Node> nodes;
  std::vector<AtomSet> states;
  std::unordered_map<AtomSet, int, VectorHash> best_g;

  Plan plan;
  nodes.push_back({0, -1, -1, 0});
  states.push_back(init);
  best_g[init] = 0;

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  long counter = 0;
  open.push({unsatisfied(goal, init), counter++, 0});

  auto extract = [&](int node_id) {
    std::vector<int> chain;
    for (int n = node_id; nodes[std::size_t(n)].parent >= 0; n = nodes[std::size_t(n)].parent)
      chain.push_back(nodes[std::size_t(n)].action);
    std::reverse(chain.begin(), chain.end());
    plan.trace.push_back(init);
    AtomSet cur = init;
    for (int a : chain) {
      plan.steps.push_back(actions[std::size_t(a)]);
      cur = strips_apply(cur, actions[std::size_t(a)]);
      plan.trace.push_back(cur);
    }
    plan.status = PlanStatus::Found;
  };

  int expansions = 0;
  while (!open.empty()) {
    if ((++expansions & 0xFF) == 0 && Clock::now() > deadline) {
      plan.status = PlanStatus::Timeout;
      return plan;
    }
    Entry e = open.top();
    open.pop();
    const int node = e.node;
    const AtomSet state = states[std::size_t(node)];
    if (nodes[std::size_t(node)].g > best_g[state]) continue;  // stale entry

    if (unsatisfied(goal, state) == 0) {
      extract(node);
      return plan;
    }

    for (std::size_t ai = 0; ai < actions.size(); ++ai) {
      const GroundAction& a = actions[ai];
      if (!subset_of(a.pre, state)) continue;
      AtomSet next = strips_apply(state, a);
      int g = nodes[std::size_t(node)].g + 1;
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= g) continue;
      best_g[next] = g;
      int id = static_cast<int>(nodes.size());
      nodes.push_back({id, node, static_cast<int>(ai), g});
      states.push_back(next);
      open.push({g + unsatisfied(goal, next), counter++, id});
    }
  }
  plan.status = PlanStatus::Unsolvable;
  return plan;
}

bool symbolically_valid(const Plan& plan, const AtomSet& init, const AtomSet& goal) {
  if (plan.status != PlanStatus::Found) return false;
  AtomSet cur = init;
  for (const GroundAction& step : plan.steps) {
    if (!subset_of(step.pre, cur)) return false;
    cur = strips_apply(cur, step);
  }
  return unsatisfied(goal, cur) == 0;
}

ReplayVerdict validate_plan(const sim::WorldState& world0, const Plan& plan,
                            const sim::WorldState& goal_world, double tol_cm) {
  sim::WorldState cur = world0;
  for (const GroundAction& step : plan.steps) {
    sim::ActionSpec a = step.action_spec();
    if (!cur.objects.count(a.pick) || !cur.objects.count(a.place))
      throw InvalidPlan("plan references an object missing from the world");
    cur = sim::apply_action(cur, a);
  }
  ReplayVerdict verdict;
  verdict.success = true;
  for (const auto& [id, obj] : goal_world.objects) {
    const auto& got = cur.objects.at(id);
    double dx = got.x - obj.x, dy = got.y - obj.y, dz = got.z - obj.z;
    double err = std::sqrt(dx * dx + dy * dy + dz * dz);
    verdict.max_err_cm = std::max(verdict.max_err_cm, err);
    if (err > tol_cm) verdict.success = false;
  }
  return verdict;
}

std::vector<ProblemPair> make_problem_pairs(int n_pairs, int n_objects, int n_actions,
                                            std::uint64_t seed) {
  if (n_pairs < 1 || n_objects < 2 || n_actions < 0)
    throw sim::ContractViolation("make_problem_pairs: bad parameters");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(0, 2);

  std::vector<ProblemPair> out;
  out.reserve(std::size_t(n_pairs));
  for (int p = 0; p < n_pairs; ++p) {
    ProblemPair pair;
    pair.init = sim::init_scene(n_objects, rng());
    pair.goal = pair.init;
    std::uniform_int_distribution<int> obj(0, n_objects - 1);
    int applied = 0, attempts = 0;
    while (applied < n_actions) {
      if (++attempts > 1000)
        throw sim::SceneError("make_problem_pairs: no effective action found");
      sim::ActionSpec a;
      a.pick = obj(rng);
      do { a.place = obj(rng); } while (a.place == a.pick);
      a.grasp = static_cast<sim::Side>(side(rng));
      a.release = static_cast<sim::Side>(side(rng));
      sim::WorldState next = sim::apply_action(pair.goal, a);
      if (next == pair.goal) continue;  // no-ops do not count
      pair.goal = std::move(next);
      pair.actions.push_back(a);
      ++applied;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

void save_plan(const std::string& path, const Plan& plan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const char* status = plan.status == PlanStatus::Found
                           ? "found"
                           : plan.status == PlanStatus::Timeout ? "timeout" : "unsolvable";
  out << "; status " << status << "\n";
  for (const GroundAction& step : plan.steps) {
    out << "(" << step.op->name();
    for (sim::ObjectId id : step.theta.to_object) out << " o" << id;
    out << ")\n";
  }
}

}  // namespace relsym::plan
