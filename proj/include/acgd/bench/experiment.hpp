#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "acgd/bench/config.hpp"
#include "acgd/bench/metrics.hpp"

namespace acgd {

struct SeedResult {
  uint64_t seed = 0;
  double final_eval_success = 0.0;
  double final_eval_mean_success_length = 0.0;
  double aulc = 0.0;  // area under the eval curve, normalized by the step span
  int64_t env_steps = 0;
};

struct ExperimentResult {
  std::filesystem::path run_dir;
  std::vector<SeedResult> seeds;
  double mean_final_success = 0.0;
  double std_final_success = 0.0;
  double mean_aulc = 0.0;
  double mean_final_success_length = 0.0;  // over seeds with at least one success
};

struct RunOptions {
  bool force = false;
  bool resume = false;
  int64_t stop_after_iterations = 0;       // 0 = run to completion (testing hook)
  std::optional<uint64_t> only_seed;       // restrict to a single seed
  std::function<void(const std::string&)> log;  // progress sink (optional)
};

// Runs every seed of the experiment, writing per-seed metrics + checkpoints
// and a machine-readable summary.json into cfg.out_dir. Refuses an existing
// run directory unless force or resume is set; a mid-run kill leaves a
// resumable checkpoint behind.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Recomputes the summary (and per-seed results) from the files on disk.
ExperimentResult summarize_run(const std::filesystem::path& run_dir);

enum class SweepAxis { kInterval, kIncrement, kMixingMode };

SweepAxis parse_sweep_axis(const std::string& name);

struct SweepResult {
  std::filesystem::path sweep_dir;
  std::vector<std::pair<std::string, ExperimentResult>> cells;
};

// One run_experiment per value; values are "a:b" interval pairs, increment
// floats, or mode-granularity names depending on the axis. Emits a
// long-format sweep.csv for curve plotting.
SweepResult run_sweep(const ExperimentConfig& base, SweepAxis axis,
                      const std::vector<std::string>& values, const RunOptions& opts = {});

struct CompareResult {
  std::string table;       // ranking with per-seed finals
  std::string curves_csv;  // run,method,env_steps,eval_mean,eval_std,n_seeds
  std::vector<std::pair<std::string, double>> ranking;
};

// Aligned-by-env-steps mean curves with std bands plus a final-success
// ranking. All runs must share the same environment.
CompareResult compare_runs(const std::vector<std::filesystem::path>& run_dirs);

// Policy-only view of any checkpoint (enough to run evaluations).
struct LoadedPolicy {
  PolicyConfig config;
  std::unique_ptr<PolicyNetwork> policy;
  std::string env_id;
  std::string method;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
};

LoadedPolicy load_policy_checkpoint(const std::filesystem::path& path);

// Normalized trapezoid area under (env_steps, success) evaluation points.
double area_under_curve(const std::vector<std::pair<int64_t, double>>& points);

}  // namespace acgd
