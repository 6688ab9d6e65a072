#include "anttamp/solver.hpp"

#include "anttamp/parallel.hpp"

namespace anttamp {

Plan tamp_solve(const Domain& domain, const WorldState& state, const Task& task,
                std::uint64_t seed, const SolverLimits& limits) {
  Rng rng(derive_seed(seed, "solve"));
  return domain.solve(state, task, rng, limits);
}

std::vector<Plan> sample_goal_states(const Domain& domain, const WorldState& state,
                                     const Task& task, std::uint64_t base_seed, int n,
                                     const SolverLimits& limits) {
  std::vector<Plan> plans(static_cast<std::size_t>(n));
  parallel_for(plans.size(), [&](std::size_t i) {
    plans[i] = tamp_solve(domain, state, task, base_seed + i, limits);
  });
  return plans;
}

}  // namespace anttamp
