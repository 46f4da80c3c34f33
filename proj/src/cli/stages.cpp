#include "relsym/cli/stages.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relsym/net/checkpoint.hpp"
#include "relsym/net/train.hpp"
#include "relsym/pddl/pddl.hpp"
#include "relsym/plan/harness.hpp"
#include "relsym/sim/dataset.hpp"
#include "relsym/sym/symbolic.hpp"

namespace relsym::cli {

namespace {

void ensure_parent(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

net::NetConfig net_config(const PipelineConfig& cfg) {
  net::NetConfig nc;
  nc.d_k = cfg.d_k;
  nc.n_heads = cfg.n_heads;
  nc.d_att = cfg.d_att;
  nc.d_z = cfg.d_z;
  nc.hidden = cfg.hidden;
  nc.input_scale = cfg.input_scale;
  nc.pre_gs_norm = cfg.pre_gs_norm;
  nc.temperature = cfg.temperature;
  nc.agg = cfg.agg_variant == "sum_self" ? net::AggVariant::SumSelf
                                         : net::AggVariant::SumSources;
  nc.attention = cfg.ablation == "all_ones" ? net::AttentionMode::AllOnes
                                            : net::AttentionMode::Relational;
  return nc;
}

sim::SplitView load_split(const PipelineConfig& cfg) {
  auto data = sim::load_dataset(cfg.resolved(cfg.dataset_path, "dataset.jsonl"));
  return sim::split_dataset(data, cfg.n_train, cfg.n_val, cfg.n_test);
}

}  // namespace

void run_collect(const PipelineConfig& cfg) {
  cfg.validate();
  sim::CollectOptions opts;
  opts.n_samples = cfg.n_train + cfg.n_val + cfg.n_test;
  opts.seed = cfg.seed;
  opts.n_objects_min = cfg.n_objects_min;
  opts.n_objects_max = cfg.n_objects_max;
  opts.episode_len = cfg.episode_len;
  auto data = sim::collect_dataset(opts);
  std::string path = cfg.resolved(cfg.dataset_path, "dataset.jsonl");
  ensure_parent(path);
  sim::save_dataset(path, data);
  std::printf("collect: %zu transitions -> %s\n", data.size(), path.c_str());
}

void run_train(const PipelineConfig& cfg) {
  cfg.validate();
  sim::SplitView split = load_split(cfg);
  net::TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.learning_rate = cfg.learning_rate;
  tc.grad_clip_norm = cfg.grad_clip_norm;
  tc.seed = cfg.seed;

  net::TrainResult result = net::train(split.train, split.val, net_config(cfg), tc);
  std::string model_path = cfg.resolved(cfg.model_path, "model.ckpt");
  std::string metrics_path = cfg.resolved(cfg.metrics_path, "metrics.csv");
  ensure_parent(model_path);
  ensure_parent(metrics_path);
  net::save_checkpoint(model_path, result.net);
  net::save_metrics(metrics_path, result.metrics);
  double test_mse = net::evaluate_mse(result.net, split.test);
  std::printf("train: %s val %.3f test %.3f cm^2%s -> %s\n", cfg.ablation.c_str(),
              result.metrics.back().val_mse, test_mse,
              result.diverged ? " (diverged, kept last good epoch)" : "",
              model_path.c_str());
}

void run_symbolize(const PipelineConfig& cfg) {
  cfg.validate();
  auto model = net::load_checkpoint(cfg.resolved(cfg.model_path, "model.ckpt"));
  auto data = sim::load_dataset(cfg.resolved(cfg.dataset_path, "dataset.jsonl"));
  auto symbolic = sym::symbolize_dataset(model, data);
  std::string path = cfg.resolved(cfg.symbolic_path, "symbolic.jsonl");
  ensure_parent(path);
  sym::save_symbolic(path, symbolic);
  std::printf("symbolize: %zu records -> %s\n", symbolic.size(), path.c_str());
}

void run_induce(const PipelineConfig& cfg) {
  cfg.validate();
  auto symbolic = sym::load_symbolic(cfg.resolved(cfg.symbolic_path, "symbolic.jsonl"));
  // Operators are learned from the training slice only.
  if (static_cast<int>(symbolic.size()) > cfg.n_train)
    symbolic.resize(static_cast<std::size_t>(cfg.n_train));
  auto result = induce::induce_operators(symbolic, cfg.min_support);
  std::string path = cfg.resolved(cfg.operators_path, "operators.txt");
  ensure_parent(path);
  induce::save_operators(path, result.operators);
  std::printf("induce: %zu operators (min_support %d, %d oversize records skipped) -> %s\n",
              result.operators.size(), cfg.min_support, result.skipped_oversize,
              path.c_str());
}

void run_emit(const PipelineConfig& cfg) {
  cfg.validate();
  auto ops = induce::load_operators(cfg.resolved(cfg.operators_path, "operators.txt"));
  std::string text = pddl::emit_domain(ops);
  std::string path = cfg.resolved(cfg.domain_path, "domain.pddl");
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  std::printf("emit: %zu action schemas -> %s\n", ops.size(), path.c_str());
}

namespace {

plan::AtomCode atom_code_from(const pddl::Atom& a) {
  auto obj = [](const std::string& name) {
    if (name.size() < 2 || name[0] != 'o')
      throw std::runtime_error("unexpected object name: " + name);
    return std::stoi(name.substr(1));
  };
  if (a.pred[0] == 'r')
    return plan::rel_atom(std::stoi(a.pred.substr(1)), obj(a.args.at(0)), obj(a.args.at(1)));
  bool positive = a.pred.rfind("not_p", 0) != 0;
  int bit = std::stoi(a.pred.substr(positive ? 1 : 5));
  return plan::unary_atom(bit, positive ? 1 : 0, obj(a.args.at(0)));
}

const char* status_name(plan::PlanStatus s) {
  switch (s) {
    case plan::PlanStatus::Found: return "found";
    case plan::PlanStatus::Timeout: return "timeout";
    case plan::PlanStatus::Unsolvable: return "unsolvable";
  }
  return "unsolvable";
}

}  // namespace

void run_plan(const PipelineConfig& cfg) {
  cfg.validate();
  std::string domain_path = cfg.resolved(cfg.domain_path, "domain.pddl");
  std::string problem_path = cfg.resolved(cfg.problem_path, "problem.pddl");
  std::string plan_path = cfg.resolved(cfg.plan_path, "plan.txt");
  ensure_parent(plan_path);

  std::ifstream df(domain_path), pf(problem_path);
  if (!df) throw std::runtime_error("cannot open: " + domain_path);
  if (!pf) throw std::runtime_error("cannot open: " + problem_path);
  std::stringstream dbuf, pbuf;
  dbuf << df.rdbuf();
  pbuf << pf.rdbuf();
  auto ops = pddl::parse_domain(dbuf.str());

  plan::Plan result;
  if (!cfg.planner_cmd.empty()) {
    result = plan::solve_with_external(cfg.planner_cmd, domain_path, problem_path, plan_path,
                                       ops);
    plan::save_plan(plan_path, result);
  } else {
    pddl::ProblemData problem = pddl::parse_problem(pbuf.str());
    std::vector<sim::ObjectId> objects;
    for (const auto& name : problem.objects) objects.push_back(std::stoi(name.substr(1)));
    plan::AtomSet init, goal;
    for (const auto& a : problem.init) init.push_back(atom_code_from(a));
    for (const auto& a : problem.goal) goal.push_back(atom_code_from(a));
    std::sort(init.begin(), init.end());
    std::sort(goal.begin(), goal.end());
    auto actions = plan::ground(ops, objects);
    result = plan::search(init, goal, actions, cfg.timeout_s);
    plan::save_plan(plan_path, result);
  }
  std::printf("plan: status %s, %zu steps -> %s\n", status_name(result.status),
              result.steps.size(), plan_path.c_str());
}

void run_plan_generated(const PipelineConfig& cfg, int n_objects, int n_actions) {
  cfg.validate();
  auto model = net::load_checkpoint(cfg.resolved(cfg.model_path, "model.ckpt"));
  auto ops = induce::load_operators(cfg.resolved(cfg.operators_path, "operators.txt"));

  auto pairs = plan::make_problem_pairs(1, n_objects, n_actions, cfg.seed);
  const plan::ProblemPair& pair = pairs.front();

  sym::SymbolicState init_sym = plan::world_symbolic(model, pair.init);
  sym::SymbolicState goal_sym = plan::world_symbolic(model, pair.goal);
  std::string problem_path = cfg.resolved(cfg.problem_path, "problem.pddl");
  ensure_parent(problem_path);
  {
    std::ofstream out(problem_path);
    out << pddl::emit_problem(init_sym, goal_sym, sim::contact_graph(pair.goal));
  }

  std::vector<sim::ObjectId> objects;
  for (const auto& [id, obj] : pair.init.objects) objects.push_back(id);
  auto actions = plan::ground(ops, objects);
  plan::Plan result = plan::search(plan::state_atoms(init_sym),
                                   plan::goal_atoms(goal_sym, sim::contact_graph(pair.goal)),
                                   actions, cfg.timeout_s);
  std::string plan_path = cfg.resolved(cfg.plan_path, "plan.txt");
  ensure_parent(plan_path);
  plan::save_plan(plan_path, result);

  if (result.status == plan::PlanStatus::Found) {
    auto verdict = plan::validate_plan(pair.init, result, pair.goal, cfg.tol_cm);
    std::printf("plan: found %zu steps, replay %s (max err %.2f cm) -> %s\n",
                result.steps.size(), verdict.success ? "valid" : "invalid",
                verdict.max_err_cm, plan_path.c_str());
  } else {
    std::printf("plan: status %s -> %s\n", status_name(result.status), plan_path.c_str());
  }
}

void run_eval(const PipelineConfig& cfg) {
  cfg.validate();
  auto model = net::load_checkpoint(cfg.resolved(cfg.model_path, "model.ckpt"));
  auto ops = induce::load_operators(cfg.resolved(cfg.operators_path, "operators.txt"));

  plan::EvalReport report =
      plan::run_planning_eval(model, ops, cfg.object_counts(), cfg.eval_pairs_per_count,
                              cfg.eval_max_actions, cfg.timeout_s, cfg.tol_cm, cfg.seed);
  std::string path = cfg.resolved(cfg.report_path, "report.csv");
  ensure_parent(path);
  plan::save_report(path, report);

  std::ostringstream summary;
  for (int n : cfg.object_counts())
    summary << " " << n << ":" << static_cast<int>(100 * report.success_rate(n) + 0.5)
            << "%";
  std::printf("eval: success per object count%s -> %s\n", summary.str().c_str(),
              path.c_str());
}

void run_pipeline(const PipelineConfig& cfg) {
  run_collect(cfg);
  run_train(cfg);
  run_symbolize(cfg);
  run_induce(cfg);
  run_emit(cfg);
  run_eval(cfg);
}

}  // namespace relsym::cli
