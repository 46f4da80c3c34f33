#pragma once

#include <string>
#include <vector>

#include "relsym/induce/operators.hpp"

namespace relsym::pddl {

struct Atom {
  std::string pred;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom&) const = default;
};

struct ProblemData {
  std::string name;
  std::string domain;
  std::vector<std::string> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  bool operator==(const ProblemData&) const = default;
};

struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

struct EmitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string object_name(sim::ObjectId id) { return "o" + std::to_string(id); }

// STRIPS fragment: conjunctive preconditions and goals, add/delete effects,
// dual p/not_p unary predicates, positive binary relation predicates.
std::string emit_domain(const std::vector<induce::LiftedOperator>& ops,
                        const std::string& domain_name = "relsym");

// Goal relational atoms are restricted to object pairs in `goal_contacts`;
// unary goal atoms cover every object. The init section is emitted in full.
std::string emit_problem(const sym::SymbolicState& init, const sym::SymbolicState& goal,
                         const sim::ContactSet& goal_contacts,
                         const std::string& problem_name = "task",
                         const std::string& domain_name = "relsym");

std::vector<induce::LiftedOperator> parse_domain(const std::string& text);
ProblemData parse_problem(const std::string& text);

// Planner output lines of the form "(action-name obj1 obj2 ...)".
std::vector<std::pair<std::string, std::vector<std::string>>> parse_plan_lines(
    const std::string& text);

}  // namespace relsym::pddl
