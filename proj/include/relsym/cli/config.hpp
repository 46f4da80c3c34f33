#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace relsym::cli {

// All pipeline knobs; the `paper` profile carries the reference constants
// (160K/20K/20K split, 4000 epochs, support 50, 10 s, 5 cm), the `desk`
// profile shrinks dataset sizes and epochs for workstation runs.
struct PipelineConfig {
  // dataset
  int n_train = 160000;
  int n_val = 20000;
  int n_test = 20000;
  int n_objects_min = 2;
  int n_objects_max = 4;
  int episode_len = 8;
  // network + training
  int epochs = 4000;
  int batch_size = 128;
  double learning_rate = 1e-4;
  double grad_clip_norm = 10.0;
  double pre_gs_norm = 3.0;
  double temperature = 1.0;
  int d_k = 1;
  int n_heads = 3;
  int d_att = 32;
  int d_z = 32;
  int hidden = 128;
  double input_scale = 0.01;
  std::string ablation = "relational";     // relational | all_ones
  std::string agg_variant = "sum_sources"; // sum_sources | sum_self
  // induction
  int min_support = 50;
  // planning + evaluation
  double timeout_s = 10.0;
  double tol_cm = 5.0;
  int eval_pairs_per_count = 100;
  int eval_max_actions = 3;
  std::string eval_object_counts = "2,3,4";
  // seeds
  std::uint64_t seed = 0;
  // artifacts
  std::string out_dir = "runs/out";
  std::string dataset_path;    // default: <out_dir>/dataset.jsonl
  std::string model_path;      // default: <out_dir>/model.ckpt
  std::string metrics_path;    // default: <out_dir>/metrics.csv
  std::string symbolic_path;   // default: <out_dir>/symbolic.jsonl
  std::string operators_path;  // default: <out_dir>/operators.txt
  std::string domain_path;     // default: <out_dir>/domain.pddl
  std::string problem_path;    // default: <out_dir>/problem.pddl
  std::string plan_path;       // default: <out_dir>/plan.txt
  std::string report_path;     // default: <out_dir>/report.csv
  std::string planner_cmd;     // external planner template; empty = embedded

  void validate() const;
  std::string resolved(const std::string& explicit_path, const std::string& fallback) const;
  std::vector<int> object_counts() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PipelineConfig profile_config(const std::string& name);  // "paper" or "desk"

// key=value lines, '#' comments. Unknown keys raise ConfigError naming the key.
void apply_config_file(PipelineConfig& cfg, const std::string& path);
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

}  // namespace relsym::cli
