#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relsym/induce/operators.hpp"
#include "relsym/sim/world.hpp"

namespace relsym::plan {

// Ground atoms packed into 64 bits: unary polarity-bit-object or relation
// head-object-object. Objects ids must fit 20 bits.
using AtomCode = std::uint64_t;

AtomCode unary_atom(int bit, int value, sim::ObjectId obj);
AtomCode rel_atom(int head, sim::ObjectId src, sim::ObjectId dst);

using AtomSet = std::vector<AtomCode>;  // sorted, unique

AtomSet state_atoms(const sym::SymbolicState& s);
AtomSet goal_atoms(const sym::SymbolicState& goal, const sim::ContactSet& goal_contacts);

struct GroundAction {
  const induce::LiftedOperator* op = nullptr;
  induce::Substitution theta;
  AtomSet pre, add, del;

  // Executable form; requires the operator to carry a place argument.
  sim::ActionSpec action_spec() const;
};

// Every injective substitution of operator variables by objects.
std::vector<GroundAction> ground(const std::vector<induce::LiftedOperator>& ops,
                                 const std::vector<sim::ObjectId>& objects);

enum class PlanStatus { Found, Timeout, Unsolvable };

struct Plan {
  PlanStatus status = PlanStatus::Unsolvable;
  std::vector<GroundAction> steps;
  std::vector<AtomSet> trace;  // states after each step, starting with init
};

// A* over ground-atom sets with the goal-count heuristic; FIFO tie-breaking.
Plan search(const AtomSet& init, const AtomSet& goal, const std::vector<GroundAction>& actions,
            double timeout_s = 10.0);

// Step-validity of a Found plan: preconditions hold along the trace and the
// final state satisfies the goal.
bool symbolically_valid(const Plan& plan, const AtomSet& init, const AtomSet& goal);

struct ReplayVerdict {
  bool success = false;
  double max_err_cm = 0.0;
};

struct InvalidPlan : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Replays the plan's actions through the simulator and compares every final
// object position against the goal world.
ReplayVerdict validate_plan(const sim::WorldState& world0, const Plan& plan,
                            const sim::WorldState& goal_world, double tol_cm = 5.0);

struct ProblemPair {
  sim::WorldState init;
  sim::WorldState goal;
  std::vector<sim::ActionSpec> actions;  // the scrambling actions that built the goal
};

// Goal states are produced by applying `n_actions` random effective actions
// (no-ops are not counted) to a fresh scene.
std::vector<ProblemPair> make_problem_pairs(int n_pairs, int n_objects, int n_actions,
                                            std::uint64_t seed);

void save_plan(const std::string& path, const Plan& plan);

}  // namespace relsym::plan
