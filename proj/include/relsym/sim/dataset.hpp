#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relsym/sim/types.hpp"

namespace relsym::sim {

struct CollectOptions {
  int n_samples = 0;
  std::uint64_t seed = 0;
  int n_objects_min = 2;
  int n_objects_max = 4;
  int episode_len = 8;  // actions per episode before the scene resets
};

std::vector<Transition> collect_dataset(const CollectOptions& opts);

struct SplitView {
  std::vector<Transition> train, val, test;
};

// Consecutive split; n_train + n_val + n_test must not exceed the dataset.
SplitView split_dataset(const std::vector<Transition>& all, int n_train, int n_val,
                        int n_test);

// Line-delimited records with a self-describing header line.
void save_dataset(const std::string& path, const std::vector<Transition>& transitions);
std::vector<Transition> load_dataset(const std::string& path);

}  // namespace relsym::sim
