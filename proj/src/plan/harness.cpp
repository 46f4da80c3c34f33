#include "relsym/plan/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "relsym/pddl/pddl.hpp"

namespace relsym::plan {

sym::SymbolicState world_symbolic(const net::RelationalNet<float>& model,
                                  const sim::WorldState& world) {
  std::vector<sim::ObjectId> ids;
  std::vector<std::array<double, 6>> feats;
  for (const auto& [id, obj] : world.objects) {
    ids.push_back(id);
    feats.push_back(obj.features());
  }
  return sym::symbolize_state(model, ids, feats);
}

PairOutcome solve_pair(const net::RelationalNet<float>& model,
                       const std::vector<GroundAction>& actions, const ProblemPair& pair,
                       double timeout_s, double tol_cm) {
  sym::SymbolicState init_sym = world_symbolic(model, pair.init);
  sym::SymbolicState goal_sym = world_symbolic(model, pair.goal);
  AtomSet init = state_atoms(init_sym);
  AtomSet goal = goal_atoms(goal_sym, sim::contact_graph(pair.goal));

  PairOutcome outcome;
  Plan plan = search(init, goal, actions, timeout_s);
  outcome.status = plan.status;
  outcome.plan_length = static_cast<int>(plan.steps.size());
  if (plan.status == PlanStatus::Found) {
    ReplayVerdict verdict = validate_plan(pair.init, plan, pair.goal, tol_cm);
    outcome.validated = verdict.success;
    outcome.max_err_cm = verdict.max_err_cm;
  }
  return outcome;
}

double EvalReport::success_rate(int n_objects) const {
  int total = 0, validated = 0;
  for (const auto& c : cells)
    if (c.n_objects == n_objects) {
      total += c.total;
      validated += c.validated;
    }
  return total ? static_cast<double>(validated) / total : 0.0;
}

EvalReport run_planning_eval(const net::RelationalNet<float>& model,
                             const std::vector<induce::LiftedOperator>& ops,
                             const std::vector<int>& object_counts, int pairs_per_count,
                             int max_actions, double timeout_s, double tol_cm,
                             std::uint64_t seed) {
  EvalReport report;
  for (int n : object_counts) {
    std::vector<sim::ObjectId> objects;
    for (int i = 0; i < n; ++i) objects.push_back(i);
    std::vector<GroundAction> actions = ground(ops, objects);

    std::map<int, EvalCell> by_actions;
    for (int p = 0; p < pairs_per_count; ++p) {
      int n_act = 1 + p % max_actions;
      auto pairs = make_problem_pairs(1, n, n_act, seed + std::uint64_t(n) * 7919 +
                                                      std::uint64_t(p) * 104729);
      PairOutcome outcome = solve_pair(model, actions, pairs.front(), timeout_s, tol_cm);
      EvalCell& cell = by_actions[n_act];
      cell.n_objects = n;
      cell.n_actions = n_act;
      ++cell.total;
      if (outcome.status == PlanStatus::Found) ++cell.found;
      if (outcome.validated) ++cell.validated;
    }
    for (const auto& [k, cell] : by_actions) report.cells.push_back(cell);
  }
  return report;
}

void save_report(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "objects,actions,total,found,validated,success_rate\n";
  char buf[160];
  for (const auto& c : report.cells) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.4f\n", c.n_objects, c.n_actions,
                  c.total, c.found, c.validated,
                  c.total ? double(c.validated) / c.total : 0.0);
    out << buf;
  }
}

Plan solve_with_external(const std::string& command_template, const std::string& domain_path,
                         const std::string& problem_path, const std::string& plan_path,
                         const std::vector<induce::LiftedOperator>& ops) {
  std::string cmd = command_template;
  auto replace_all = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key))
      cmd.replace(pos, key.size(), value);
  };
  replace_all("{domain}", domain_path);
  replace_all("{problem}", problem_path);
  replace_all("{plan}", plan_path);

  std::error_code ec;
  std::filesystem::remove(plan_path, ec);
  int rc = std::system(cmd.c_str());
  Plan plan;
  if (rc != 0 || !std::filesystem::exists(plan_path)) {
    plan.status = PlanStatus::Unsolvable;
    return plan;
  }

  std::ifstream in(plan_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto lines = pddl::parse_plan_lines(buffer.str());

  std::map<std::string, const induce::LiftedOperator*> by_name;
  for (const auto& op : ops) by_name[op.name()] = &op;

  std::vector<sim::ObjectId> all_objects;  // unused by grounding here
  for (const auto& [name, args] : lines) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw InvalidPlan("unknown action in plan file: " + name);
    std::vector<sim::ObjectId> binding;
    for (const std::string& arg : args) {
      if (arg.size() < 2 || arg[0] != 'o') throw InvalidPlan("bad object name: " + arg);
      binding.push_back(std::stoi(arg.substr(1)));
    }
    if (static_cast<int>(binding.size()) != it->second->key.n_vars)
      throw InvalidPlan("arity mismatch in plan step " + name);
    std::vector<GroundAction> one = ground({*it->second}, binding);
    // `ground` enumerates all injective bindings over the given objects; pick
    // the one matching the plan line's argument order.
    bool matched = false;
    for (auto& ga : one)
      if (ga.theta.to_object == binding) {
        GroundAction step = ga;
        step.op = it->second;
        plan.steps.push_back(std::move(step));
        matched = true;
        break;
      }
    if (!matched) throw InvalidPlan("could not ground plan step " + name);
  }
  plan.status = PlanStatus::Found;
  return plan;
}

}  // namespace relsym::plan
