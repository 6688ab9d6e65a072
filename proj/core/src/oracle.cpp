#include "anttamp/oracle.hpp"

#include <algorithm>
#include <limits>

namespace anttamp {

double oracle_vap(const Domain& domain, const WorldState& state,
                  const TaskDistribution& tasks, const OracleParams& params) {
  double expected = 0.0;
  for (const auto& entry : tasks.entries) {
    if (entry.probability == 0.0) continue;
    const std::uint64_t task_seed =
        derive_seed(params.seed_salt, entry.task.label);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < params.samples_per_task; ++k) {
      const Plan plan =
          tamp_solve(domain, state, entry.task, task_seed + static_cast<std::uint64_t>(k),
                     params.limits);
      best = std::min(best, plan.total_cost);
    }
    expected += entry.probability * best;
  }
  return expected;
}

}  // namespace anttamp
