#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsym/net/model.hpp"

namespace relsym::net {

struct EpochMetrics {
  int epoch = 0;  // 0 is the pre-training baseline
  double train_mse = 0.0;
  double val_mse = 0.0;
};

using TrainNet = RelationalNet<float>;

struct TrainResult {
  TrainNet net;
  std::vector<EpochMetrics> metrics;
  bool diverged = false;
};

// Adam with global gradient-norm clipping; metrics are per-object MSE in cm^2
// (validation and test run with hard-deterministic symbols).
TrainResult train(const std::vector<sim::Transition>& train_set,
                  const std::vector<sim::Transition>& val_set, const NetConfig& net_cfg,
                  const TrainConfig& train_cfg);

double evaluate_mse(const TrainNet& net, const std::vector<sim::Transition>& dataset);

// Autoregressive effect prediction over episodes: cumulative summed per-step
// error (per-sample loss units) for t = 1..horizon, averaged over episodes.
std::vector<double> rollout_error(const TrainNet& net,
                                  const std::vector<sim::Transition>& dataset, int horizon);

void save_metrics(const std::string& path, const std::vector<EpochMetrics>& metrics);
std::vector<EpochMetrics> load_metrics(const std::string& path);

}  // namespace relsym::net
