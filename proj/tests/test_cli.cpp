#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relsym/cli/stages.hpp"
#include "relsym/induce/operators.hpp"
#include "relsym/pddl/pddl.hpp"

using namespace relsym;
using namespace relsym::cli;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PipelineConfig tiny_config(const std::string& dir) {
  PipelineConfig cfg = profile_config("desk");
  cfg.n_train = 1600;
  cfg.n_val = 200;
  cfg.n_test = 200;
  cfg.epochs = 4;
  cfg.min_support = 20;
  cfg.eval_pairs_per_count = 3;
  cfg.eval_object_counts = "2";
  cfg.eval_max_actions = 1;
  cfg.timeout_s = 3.0;
  cfg.out_dir = dir;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("profiles pin the reference constants") {
  PipelineConfig paper = profile_config("paper");
  CHECK(paper.n_train == 160000);
  CHECK(paper.n_val == 20000);
  CHECK(paper.n_test == 20000);
  CHECK(paper.epochs == 4000);
  CHECK(paper.batch_size == 128);
  CHECK(paper.learning_rate == doctest::Approx(1e-4));
  CHECK(paper.grad_clip_norm == doctest::Approx(10.0));
  CHECK(paper.pre_gs_norm == doctest::Approx(3.0));
  CHECK(paper.min_support == 50);
  CHECK(paper.timeout_s == doctest::Approx(10.0));
  CHECK(paper.tol_cm == doctest::Approx(5.0));

  PipelineConfig desk = profile_config("desk");
  CHECK(desk.n_train == 20000);
  CHECK(desk.epochs == 200);
  CHECK(desk.min_support == 50);  // only sizes and epochs shrink

  CHECK_THROWS_AS(profile_config("giant"), ConfigError);
}

TEST_CASE("config files apply settings and reject unknown keys") {
  auto dir = std::filesystem::temp_directory_path();
  auto path = (dir / "relsym_cfg.txt").string();
  {
    std::ofstream out(path);
    out << "# comment\n";
    out << "epochs = 7\n";
    out << "ablation = all_ones   # trailing comment\n";
    out << "tol_cm=2.5\n";
  }
  PipelineConfig cfg = profile_config("desk");
  apply_config_file(cfg, path);
  CHECK(cfg.epochs == 7);
  CHECK(cfg.ablation == "all_ones");
  CHECK(cfg.tol_cm == doctest::Approx(2.5));

  {
    std::ofstream out(path);
    out << "epohcs = 7\n";
  }
  PipelineConfig cfg2 = profile_config("desk");
  try {
    apply_config_file(cfg2, path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("epohcs") != std::string::npos);
  }
  std::filesystem::remove(path);

  PipelineConfig bad = profile_config("desk");
  bad.ablation = "mystery";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("stage chain produces artifacts and reruns reproduce them byte for byte") {
  auto dir = std::filesystem::temp_directory_path() / "relsym_cli_stage";
  std::filesystem::remove_all(dir);
  PipelineConfig cfg = tiny_config(dir.string());

  run_collect(cfg);
  std::string dataset = slurp((dir / "dataset.jsonl").string());

  run_collect(cfg);  // stage isolation: identical inputs, identical bytes
  CHECK(slurp((dir / "dataset.jsonl").string()) == dataset);

  run_train(cfg);
  CHECK(std::filesystem::exists(dir / "model.ckpt"));
  CHECK(std::filesystem::exists(dir / "metrics.csv"));

  run_symbolize(cfg);
  run_induce(cfg);
  run_emit(cfg);
  CHECK(std::filesystem::exists(dir / "symbolic.jsonl"));
  CHECK(std::filesystem::exists(dir / "operators.txt"));
  CHECK(std::filesystem::exists(dir / "domain.pddl"));

  std::string domain = slurp((dir / "domain.pddl").string());
  run_emit(cfg);
  CHECK(slurp((dir / "domain.pddl").string()) == domain);

  auto ops = induce::load_operators((dir / "operators.txt").string());
  CHECK_FALSE(ops.empty());
  auto parsed = pddl::parse_domain(domain);
  REQUIRE(parsed.size() == ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    CHECK(parsed[i].key == ops[i].key);
    CHECK(parsed[i].effects == ops[i].effects);
  }

  run_eval(cfg);
  CHECK(std::filesystem::exists(dir / "report.csv"));

  std::filesystem::remove_all(dir);
}

TEST_CASE("plan subcommand records unsolvable goals as data, not errors") {
  auto dir = std::filesystem::temp_directory_path() / "relsym_cli_plan";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  PipelineConfig cfg = tiny_config(dir.string());

  // A domain whose single schema cannot reach the goal relation.
  std::string domain = R"((define (domain mini)
  (:requirements :strips)
  (:predicates (p0 ?x) (not_p0 ?x) (r0 ?x ?y) (r1 ?x ?y))
  (:action pick-place_center_center__kfeedc0de
    :parameters (?a ?b)
    :precondition (and (p0 ?a) (p0 ?b))
    :effect (and (r0 ?a ?b))
  )
))";
  std::string problem = R"((define (problem stuck)
  (:domain mini)
  (:objects o0 o1)
  (:init (p0 o0) (p0 o1))
  (:goal (and (r1 o0 o1)))
))";
  std::ofstream((dir / "domain.pddl").string()) << domain;
  std::ofstream((dir / "problem.pddl").string()) << problem;

  run_plan(cfg);  // must not throw
  std::string plan_text = slurp((dir / "plan.txt").string());
  CHECK(plan_text.find("status unsolvable") != std::string::npos);

  // Solvable variant goes through with steps.
  std::string problem2 = R"((define (problem ok)
  (:domain mini)
  (:objects o0 o1)
  (:init (p0 o0) (p0 o1))
  (:goal (and (r0 o1 o0)))
))";
  std::ofstream((dir / "problem.pddl").string()) << problem2;
  run_plan(cfg);
  plan_text = slurp((dir / "plan.txt").string());
  CHECK(plan_text.find("status found") != std::string::npos);
  CHECK(plan_text.find("pick-place_center_center__kfeedc0de o1 o0") != std::string::npos);

  std::filesystem::remove_all(dir);
}
