#pragma once

#include "relsym/net/model.hpp"
#include "relsym/plan/planner.hpp"

namespace relsym::plan {

sym::SymbolicState world_symbolic(const net::RelationalNet<float>& model,
                                  const sim::WorldState& world);

struct PairOutcome {
  PlanStatus status = PlanStatus::Unsolvable;
  bool validated = false;
  double max_err_cm = 0.0;
  int plan_length = 0;
};

PairOutcome solve_pair(const net::RelationalNet<float>& model,
                       const std::vector<GroundAction>& actions, const ProblemPair& pair,
                       double timeout_s, double tol_cm);

struct EvalCell {
  int n_objects = 0;
  int n_actions = 0;
  int total = 0;
  int found = 0;
  int validated = 0;
};

struct EvalReport {
  std::vector<EvalCell> cells;

  double success_rate(int n_objects) const;  // validated / total over the object count
};

// Fig-4-style sweep: `pairs_per_count` problems per object count, scrambling
// action counts cycling 1..max_actions.
EvalReport run_planning_eval(const net::RelationalNet<float>& model,
                             const std::vector<induce::LiftedOperator>& ops,
                             const std::vector<int>& object_counts, int pairs_per_count,
                             int max_actions, double timeout_s, double tol_cm,
                             std::uint64_t seed);

void save_report(const std::string& path, const EvalReport& report);

// Runs `command_template` with {domain}, {problem}, and {plan} placeholders
// substituted, then reads back "(action obj...)" lines from the plan file.
Plan solve_with_external(const std::string& command_template, const std::string& domain_path,
                         const std::string& problem_path, const std::string& plan_path,
                         const std::vector<induce::LiftedOperator>& ops);

}  // namespace relsym::plan
