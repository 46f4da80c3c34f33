#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "relsym/cli/stages.hpp"

using namespace relsym;

int main(int argc, char** argv) {
  CLI::App app{"relsym: learned symbols and operators for pick-and-place planning"};
  app.require_subcommand(1);

  std::string profile = "desk";
  std::string config_path;
  cli::PipelineConfig cfg = cli::profile_config(profile);

  bool seed_set = false;
  std::uint64_t seed = 0;
  std::string out_dir;

  app.add_option("--profile", profile, "configuration profile: paper or desk")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "master seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out-dir", out_dir, "artifact directory");

  // Per-stage path overrides.
  std::string dataset_in, model_in, symbolic_in, operators_in, domain_in, problem_in;
  std::string stage_out;
  app.add_option("--dataset", dataset_in, "dataset file override");
  app.add_option("--model", model_in, "model checkpoint override");
  app.add_option("--symbolic", symbolic_in, "symbolic dataset override");
  app.add_option("--operators", operators_in, "operator file override");
  app.add_option("--domain", domain_in, "domain file override");
  app.add_option("--problem", problem_in, "problem file override");
  app.add_option("--out", stage_out, "primary output path override for the subcommand");

  auto* collect = app.add_subcommand("collect", "simulate random exploration");
  auto* train = app.add_subcommand("train", "fit the effect-prediction network");
  auto* symbolize = app.add_subcommand("symbolize", "convert transitions to symbols");
  auto* induce_cmd = app.add_subcommand("induce", "learn lifted operators");
  auto* emit = app.add_subcommand("emit", "write the PDDL domain");
  auto* plan_cmd = app.add_subcommand("plan", "solve a PDDL problem");
  auto* eval = app.add_subcommand("eval", "planning benchmark with simulator replay");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");

  int gen_objects = 0, gen_actions = 1;
  plan_cmd->add_option("--gen-objects", gen_objects,
                       "generate a problem pair with this many objects instead of "
                       "reading --problem");
  plan_cmd->add_option("--gen-actions", gen_actions,
                       "scrambling actions for the generated pair");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg = cli::profile_config(profile);
    if (!config_path.empty()) cli::apply_config_file(cfg, config_path);
    if (seed_set) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!dataset_in.empty()) cfg.dataset_path = dataset_in;
    if (!model_in.empty()) cfg.model_path = model_in;
    if (!symbolic_in.empty()) cfg.symbolic_path = symbolic_in;
    if (!operators_in.empty()) cfg.operators_path = operators_in;
    if (!domain_in.empty()) cfg.domain_path = domain_in;
    if (!problem_in.empty()) cfg.problem_path = problem_in;

    if (collect->parsed()) {
      if (!stage_out.empty()) cfg.dataset_path = stage_out;
      cli::run_collect(cfg);
    } else if (train->parsed()) {
      if (!stage_out.empty()) cfg.model_path = stage_out;
      cli::run_train(cfg);
    } else if (symbolize->parsed()) {
      if (!stage_out.empty()) cfg.symbolic_path = stage_out;
      cli::run_symbolize(cfg);
    } else if (induce_cmd->parsed()) {
      if (!stage_out.empty()) cfg.operators_path = stage_out;
      cli::run_induce(cfg);
    } else if (emit->parsed()) {
      if (!stage_out.empty()) cfg.domain_path = stage_out;
      cli::run_emit(cfg);
    } else if (plan_cmd->parsed()) {
      if (!stage_out.empty()) cfg.plan_path = stage_out;
      if (gen_objects > 0)
        cli::run_plan_generated(cfg, gen_objects, gen_actions);
      else
        cli::run_plan(cfg);
    } else if (eval->parsed()) {
      if (!stage_out.empty()) cfg.report_path = stage_out;
      cli::run_eval(cfg);
    } else if (pipeline->parsed()) {
      cli::run_pipeline(cfg);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
