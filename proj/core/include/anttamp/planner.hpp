#pragma once

#include <functional>

#include "anttamp/estimators.hpp"
#include "anttamp/solver.hpp"

namespace anttamp {

struct PlannerConfig {
  int candidate_count = 100;  // solver draws per decision
  std::uint64_t seed = 1;
  SolverLimits limits{};
};

struct PlannerResult {
  Plan plan;
  double plan_cost = 0.0;    // executed cost of the chosen plan
  double anticipated = 0.0;  // estimator value at its terminal state
  double objective = 0.0;    // plan_cost + anticipated
  int chosen_index = -1;     // which candidate won
};

/// Draw candidate_count plans for the task, score each as plan cost plus the
/// estimator's value of its terminal state, and keep the minimum. Ties go to
/// the later candidate. Pass the zero estimator to plan myopically. The
/// candidate set is exactly sample_goal_states(domain, state, task,
/// derive_seed(config.seed, "cand"), candidate_count, limits), so selections
/// can be audited externally.
PlannerResult anticipatory_tamp(const Domain& domain, const WorldState& state,
                                const Task& task, const CostEstimator& estimator,
                                const PlannerConfig& config);

struct AnnealingSchedule {
  double initial_temperature = 1000.0;
  double cooling_rate = 0.95;  // applied every iteration
  int iterations = 5000;
};

/// Acceptance rule for one annealing step: improvements always pass, uphill
/// moves pass when u < exp(-delta / temperature). u is the caller's uniform
/// draw in [0, 1); it must not be drawn at all when delta < 0.
bool anneal_accept(double delta, double temperature, double u);

struct PrepObservation {
  int iteration = 0;
  double temperature = 0.0;
  double delta = 0.0;
  bool accepted = false;
  double current_value = 0.0;  // estimator value after the step
};

struct PrepareConfig {
  AnnealingSchedule schedule{};
  double step_fraction = 0.2;  // perturbation radius / min workspace extent
  int neighbor_retries = 32;
  std::uint64_t seed = 1;
  std::function<void(const PrepObservation&)> observer;  // optional trace hook
};

struct PrepareResult {
  WorldState state;            // lowest-value state visited
  double value = 0.0;          // estimator value of that state
  double initial_value = 0.0;  // estimator value of the input state
  int accepted = 0;            // accepted steps
};

/// Task-free optimization of the environment: simulated annealing over the
/// continuous poses, symbolic arrangement fixed. Perturbs one object per
/// iteration within its region, keeping the state collision-free and
/// solvable, and returns the best state seen.
PrepareResult prepare(const Domain& domain, const WorldState& initial,
                      const CostEstimator& estimator, const PrepareConfig& config);

}  // namespace anttamp
