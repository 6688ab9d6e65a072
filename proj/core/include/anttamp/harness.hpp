#pragma once

#include <optional>
#include <string>

#include "anttamp/planner.hpp"

namespace anttamp {

enum class Variant : std::uint8_t { Myopic, AntTamp, PrepMyopic, PrepAntTamp };

std::string_view variant_name(Variant v);
Variant parse_variant(const std::string& s);
/// Prep variants optimize the environment before the task stream starts.
bool variant_prepares(Variant v);
/// Anticipating variants score candidates with the estimator; myopic ones
/// use the zero estimator at selection time.
bool variant_anticipates(Variant v);

struct DeploymentConfig {
  Variant variant = Variant::AntTamp;
  int trials = 8;
  int tasks_per_trial = 10;
  int candidate_count = 100;
  AnnealingSchedule prep_schedule{};
  double prep_step_fraction = 0.2;
  std::uint64_t seed = 1;
  bool real_timing = false;  // off: wallclock column is written as 0
  int snapshots = 0;         // capture states of the first n trials
  SolverLimits limits{};
};

struct TaskRecord {
  int trial = 0;
  int task_index = 0;
  double cost = 0.0;
  double wallclock_s = 0.0;
  std::string task_label;
};

struct TrialStats {
  double prep_displacement = 0.0;  // summed object travel during preparation
  int prep_moved = 0;              // objects preparation relocated
  double prep_value_before = 0.0;  // estimator value entering preparation
  double prep_value_after = 0.0;
};

struct TrialSnapshot {
  int trial = 0;
  WorldState initial;
  std::optional<WorldState> prepared;
  WorldState final_state;
};

struct DeploymentResult {
  std::vector<TaskRecord> records;  // trial-major, tasks_per_trial each
  std::vector<TrialStats> trials;
  std::vector<TrialSnapshot> snapshots;
  double mean_cost = 0.0;
  std::vector<double> mean_cost_by_task_index;
};

/// Run trials of task sequences against fresh random environments. Each
/// trial draws an initial state, optionally prepares it, then serves
/// tasks_per_trial tasks sampled from the domain's distribution, replanning
/// from each plan's terminal state. All randomness derives from config.seed
/// through per-trial named streams, so results are reproducible and
/// independent of the worker-pool size.
DeploymentResult run_deployment(const Domain& domain, const CostEstimator& estimator,
                                const DeploymentConfig& config);

/// Percentage cost reduction of `improved` relative to `baseline`.
double improvement_percent(double baseline_mean, double improved_mean);

void write_results_csv(const DeploymentResult& result, Variant variant,
                       const std::string& path);
void write_summary_json(const Domain& domain, const DeploymentConfig& config,
                        std::string_view estimator_name, const DeploymentResult& result,
                        const std::string& path);
/// results.csv, summary.json, and snapshot SVGs under out_dir (created if
/// missing).
void write_outputs(const Domain& domain, const DeploymentConfig& config,
                   std::string_view estimator_name, const DeploymentResult& result,
                   const std::string& out_dir);

}  // namespace anttamp
