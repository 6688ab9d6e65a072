#include "anttamp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anttamp/parallel.hpp"

namespace anttamp {

PlannerResult anticipatory_tamp(const Domain& domain, const WorldState& state,
                                const Task& task, const CostEstimator& estimator,
                                const PlannerConfig& config) {
  if (config.candidate_count < 1)
    throw std::invalid_argument("planner needs at least one candidate");

  const auto plans = sample_goal_states(domain, state, task,
                                        derive_seed(config.seed, "cand"),
                                        config.candidate_count, config.limits);
  std::vector<double> anticipated(plans.size());
  parallel_for(plans.size(), [&](std::size_t i) {
    anticipated[i] = estimator.estimate(domain, plans[i].terminal);
  });

  int best = -1;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const double obj = plans[i].total_cost + anticipated[i];
    if (obj <= best_obj) {  // later candidates win ties
      best = static_cast<int>(i);
      best_obj = obj;
    }
  }

  PlannerResult r;
  r.plan = plans[static_cast<std::size_t>(best)];
  r.plan_cost = r.plan.total_cost;
  r.anticipated = anticipated[static_cast<std::size_t>(best)];
  r.objective = best_obj;
  r.chosen_index = best;
  return r;
}

bool anneal_accept(double delta, double temperature, double u) {
  return delta < 0.0 || u < std::exp(-delta / temperature);
}

namespace {

/// One perturbation attempt: move one uniformly-chosen object by a uniform
/// offset within +-radius, staying in its region, collision-free, and
/// domain-feasible. False when every retry was rejected.
bool try_neighbor(const Domain& domain, const WorldState& cur, Rng& rng,
                  double radius, int retries, WorldState& out) {
  const auto& sc = domain.scenario();
  const EntityId e{static_cast<std::uint32_t>(1 + rng.uniform_index(sc.movable_count()))};
  if (cur.symbolic.gripper.held == e) return false;
  const double r = sc.radius(e);
  const auto legal = sc.region(cur.symbolic.placements[e.value]).rect.inset(r);

  for (int t = 0; t < retries; ++t) {
    const Pose2 p{cur.poses[e.value].x + rng.uniform(-radius, radius),
                  cur.poses[e.value].y + rng.uniform(-radius, radius)};
    if (p.x < legal.xmin || p.x > legal.xmax || p.y < legal.ymin || p.y > legal.ymax)
      continue;
    bool free = true;
    for (std::size_t j = 0; j < cur.poses.size() && free; ++j) {
      if (j == e.value) continue;
      if (cur.symbolic.gripper.held == EntityId{static_cast<std::uint32_t>(j)}) continue;
      free = geom::disc_separation(p, r, cur.poses[j], sc.entities[j].radius) >= 0.0;
    }
    if (!free) continue;
    WorldState cand = cur;
    cand.poses[e.value] = p;
    if (!domain.poses_feasible(cand)) continue;
    out = std::move(cand);
    return true;
  }
  return false;
}

}  // namespace

PrepareResult prepare(const Domain& domain, const WorldState& initial,
                      const CostEstimator& estimator, const PrepareConfig& config) {
  domain.validate_state(initial);
  Rng rng(derive_seed(config.seed, "prep"));
  const auto& ws = domain.scenario().workspace;
  const double radius = config.step_fraction * std::min(ws.width(), ws.height());

  WorldState current = initial;
  double v_current = estimator.estimate(domain, current);

  PrepareResult res;
  res.state = current;
  res.value = v_current;
  res.initial_value = v_current;

  double temperature = config.schedule.initial_temperature;
  for (int i = 0; i < config.schedule.iterations; ++i) {
    WorldState neighbor;
    const bool moved =
        try_neighbor(domain, current, rng, radius, config.neighbor_retries, neighbor);
    const double v_new = moved ? estimator.estimate(domain, neighbor) : v_current;
    const double delta = v_new - v_current;

    // The uniform draw happens only for non-improving candidates.
    const bool accepted =
        delta < 0.0 || anneal_accept(delta, temperature, rng.uniform());
    if (accepted) {
      if (moved) current = std::move(neighbor);
      v_current = v_new;
      if (v_current < res.value) {
        res.state = current;
        res.value = v_current;
      }
      ++res.accepted;
    }
    if (config.observer)
      config.observer({i, temperature, delta, accepted, v_current});
    temperature *= config.schedule.cooling_rate;
  }
  return res;
}

}  // namespace anttamp
