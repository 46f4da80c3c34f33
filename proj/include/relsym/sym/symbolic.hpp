#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "relsym/net/model.hpp"
#include "relsym/sim/types.hpp"

namespace relsym::sym {

// Hard symbolic view of one state: unary bits per object plus K boolean
// relation matrices over the record's objects (diagonal included).
struct SymbolicState {
  std::vector<sim::ObjectId> ids;       // ascending
  std::vector<std::vector<int>> unary;  // per object, d_k bits
  std::vector<Eigen::MatrixXi> rel;     // per head, n x n

  bool operator==(const SymbolicState&) const = default;
};

struct SymbolicTransition {
  SymbolicState pre;
  sim::ActionSpec action;
  SymbolicState post;  // same ids as pre

  bool operator==(const SymbolicTransition&) const = default;
};

SymbolicState symbolize_state(const net::RelationalNet<float>& model,
                              const std::vector<sim::ObjectId>& ids,
                              std::span<const std::array<double, 6>> features);

std::vector<SymbolicTransition> symbolize_dataset(
    const net::RelationalNet<float>& model, const std::vector<sim::Transition>& transitions);

void save_symbolic(const std::string& path, const std::vector<SymbolicTransition>& data);
std::vector<SymbolicTransition> load_symbolic(const std::string& path);

}  // namespace relsym::sym
