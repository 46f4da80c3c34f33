#include "relsym/cli/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace relsym::cli {

void PipelineConfig::validate() const {
  if (n_train < 1 || n_val < 0 || n_test < 0) throw ConfigError("invalid split sizes");
  if (n_objects_min < 2 || n_objects_max < n_objects_min)
    throw ConfigError("invalid n_objects range");
  if (epochs < 1 || batch_size < 1) throw ConfigError("invalid training sizes");
  if (learning_rate <= 0) throw ConfigError("invalid learning_rate");
  if (ablation != "relational" && ablation != "all_ones")
    throw ConfigError("invalid ablation: " + ablation);
  if (agg_variant != "sum_sources" && agg_variant != "sum_self")
    throw ConfigError("invalid agg_variant: " + agg_variant);
  if (min_support < 1) throw ConfigError("invalid min_support");
  if (timeout_s <= 0 || tol_cm <= 0) throw ConfigError("invalid planning limits");
  if (object_counts().empty()) throw ConfigError("invalid eval_object_counts");
}

std::string PipelineConfig::resolved(const std::string& explicit_path,
                                     const std::string& fallback) const {
  return explicit_path.empty() ? out_dir + "/" + fallback : explicit_path;
}

std::vector<int> PipelineConfig::object_counts() const {
  std::vector<int> out;
  std::istringstream ss(eval_object_counts);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) out.push_back(std::stoi(part));
  return out;
}

PipelineConfig profile_config(const std::string& name) {
  PipelineConfig cfg;  // defaults carry the paper constants
  if (name == "paper") return cfg;
  if (name == "desk") {
    cfg.n_train = 20000;
    cfg.n_val = 2500;
    cfg.n_test = 2500;
    cfg.epochs = 200;
    return cfg;
  }
  throw ConfigError("unknown profile: " + name);
}

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  auto as_int = [&] { return std::stoi(value); };
  auto as_double = [&] { return std::stod(value); };
  auto as_u64 = [&] { return std::stoull(value); };

  if (key == "n_train") cfg.n_train = as_int();
  else if (key == "n_val") cfg.n_val = as_int();
  else if (key == "n_test") cfg.n_test = as_int();
  else if (key == "n_objects_min") cfg.n_objects_min = as_int();
  else if (key == "n_objects_max") cfg.n_objects_max = as_int();
  else if (key == "episode_len") cfg.episode_len = as_int();
  else if (key == "epochs") cfg.epochs = as_int();
  else if (key == "batch_size") cfg.batch_size = as_int();
  else if (key == "learning_rate") cfg.learning_rate = as_double();
  else if (key == "grad_clip_norm") cfg.grad_clip_norm = as_double();
  else if (key == "pre_gs_norm") cfg.pre_gs_norm = as_double();
  else if (key == "temperature") cfg.temperature = as_double();
  else if (key == "d_k") cfg.d_k = as_int();
  else if (key == "n_heads") cfg.n_heads = as_int();
  else if (key == "d_att") cfg.d_att = as_int();
  else if (key == "d_z") cfg.d_z = as_int();
  else if (key == "hidden") cfg.hidden = as_int();
  else if (key == "input_scale") cfg.input_scale = as_double();
  else if (key == "ablation") cfg.ablation = value;
  else if (key == "agg_variant") cfg.agg_variant = value;
  else if (key == "min_support") cfg.min_support = as_int();
  else if (key == "timeout_s") cfg.timeout_s = as_double();
  else if (key == "tol_cm") cfg.tol_cm = as_double();
  else if (key == "eval_pairs_per_count") cfg.eval_pairs_per_count = as_int();
  else if (key == "eval_max_actions") cfg.eval_max_actions = as_int();
  else if (key == "eval_object_counts") cfg.eval_object_counts = value;
  else if (key == "seed") cfg.seed = as_u64();
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "dataset_path") cfg.dataset_path = value;
  else if (key == "model_path") cfg.model_path = value;
  else if (key == "metrics_path") cfg.metrics_path = value;
  else if (key == "symbolic_path") cfg.symbolic_path = value;
  else if (key == "operators_path") cfg.operators_path = value;
  else if (key == "domain_path") cfg.domain_path = value;
  else if (key == "problem_path") cfg.problem_path = value;
  else if (key == "plan_path") cfg.plan_path = value;
  else if (key == "report_path") cfg.report_path = value;
  else if (key == "planner_cmd") cfg.planner_cmd = value;
  else throw ConfigError("unknown config key: " + key);
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace relsym::cli
