#pragma once

#include <cstdint>
#include <vector>

#include "anttamp/domain.hpp"

namespace anttamp {

/// One feasible plan for `task` from `state`, with the terminal state drawn
/// at random from the task's goal region. Each seed yields one independent
/// draw; repeated calls with the same seed return the identical plan.
Plan tamp_solve(const Domain& domain, const WorldState& state, const Task& task,
                std::uint64_t seed, const SolverLimits& limits = {});

/// n independent plans for the same task, seeded base_seed..base_seed+n-1 and
/// returned in seed order. Plans are computed concurrently; the result is
/// identical for any worker-pool size.
std::vector<Plan> sample_goal_states(const Domain& domain, const WorldState& state,
                                     const Task& task, std::uint64_t base_seed, int n,
                                     const SolverLimits& limits = {});

}  // namespace anttamp
