#pragma once

#include "relsym/cli/config.hpp"

namespace relsym::cli {

// Each stage reads its input artifacts, writes its outputs, and prints a
// one-line summary. Failures raise; the CLI maps exceptions to nonzero exits.
void run_collect(const PipelineConfig& cfg);
void run_train(const PipelineConfig& cfg);
void run_symbolize(const PipelineConfig& cfg);
void run_induce(const PipelineConfig& cfg);
void run_emit(const PipelineConfig& cfg);

// Solves problem_path against domain_path (embedded A* or the configured
// external planner) and writes plan_path. Unsolvable and Timeout are recorded
// in the plan file, not errors.
void run_plan(const PipelineConfig& cfg);

// Generates a problem pair, writes problem_path, solves it, replays the plan
// in the simulator, and reports the verdict.
void run_plan_generated(const PipelineConfig& cfg, int n_objects, int n_actions);

void run_eval(const PipelineConfig& cfg);
void run_pipeline(const PipelineConfig& cfg);

}  // namespace relsym::cli
