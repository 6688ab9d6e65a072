#pragma once

#include "anttamp/estimators.hpp"
#include "anttamp/solver.hpp"

namespace anttamp {

struct OracleParams {
  int samples_per_task = 10;  // goal-state draws per task; the best is kept
  std::uint64_t seed_salt = 0;
  SolverLimits limits{};
};

/// Expected cost of the next task when the environment is left in `state`:
/// sum over the task distribution of probability times the cheapest of
/// samples_per_task solver draws. Task seeds derive from each task's label,
/// so a task keeps its exact cost contribution across different mixtures.
double oracle_vap(const Domain& domain, const WorldState& state,
                  const TaskDistribution& tasks, const OracleParams& params = {});

/// Estimator backed by oracle_vap over the domain's own task distribution.
/// Exact (up to sampling) but slow: every estimate runs the solver
/// tasks x samples times. Used to label training data and as a reference.
class OracleEstimator final : public CostEstimator {
 public:
  explicit OracleEstimator(const Domain& domain, OracleParams params = {})
      : tasks_(domain.task_distribution()), params_(params) {}

  std::string_view name() const override { return "oracle"; }
  double estimate(const Domain& domain, const WorldState& state) const override {
    return oracle_vap(domain, state, tasks_, params_);
  }

 private:
  TaskDistribution tasks_;
  OracleParams params_;
};

}  // namespace anttamp
