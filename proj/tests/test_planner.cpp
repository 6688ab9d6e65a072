#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "anttamp/namo.hpp"
#include "anttamp/oracle.hpp"
#include "anttamp/planner.hpp"

using namespace anttamp;

namespace {

std::unique_ptr<Domain> small_floor() {
  NamoScenarioParams p;
  p.object_count = 3;
  return make_domain(make_namo_scenario(p));
}

// The documented candidate stream, scored the way the planner scores it.
struct Audit {
  std::vector<Plan> plans;
  std::vector<double> objectives;
  int best = -1;
};

Audit audit_selection(const Domain& domain, const WorldState& w, const Task& t,
                      const CostEstimator& est, const PlannerConfig& cfg) {
  Audit a;
  a.plans = sample_goal_states(domain, w, t, derive_seed(cfg.seed, "cand"),
                               cfg.candidate_count, cfg.limits);
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.plans.size(); ++i) {
    const double obj =
        a.plans[i].total_cost + est.estimate(domain, a.plans[i].terminal);
    a.objectives.push_back(obj);
    if (obj <= best_obj) {
      a.best = static_cast<int>(i);
      best_obj = obj;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("plan selection is an auditable argmin over the candidate stream") {
  const auto domain = small_floor();
  Rng rng(derive_seed(41, "state"));
  const Task t = domain->task_distribution().entries[1].task;

  OracleParams op;
  op.samples_per_task = 2;
  const OracleEstimator oracle(*domain, op);

  for (std::uint64_t seed : {3ull, 9ull}) {
    const WorldState w = domain->random_state(rng);
    PlannerConfig cfg;
    cfg.candidate_count = 12;
    cfg.seed = seed;

    for (const CostEstimator* est :
         {static_cast<const CostEstimator*>(&zero_estimator()),
          static_cast<const CostEstimator*>(&oracle)}) {
      const Audit a = audit_selection(*domain, w, t, *est, cfg);
      const PlannerResult r = anticipatory_tamp(*domain, w, t, *est, cfg);

      CHECK(r.chosen_index == a.best);
      CHECK(r.objective == a.objectives[static_cast<std::size_t>(a.best)]);
      CHECK(r.plan_cost == a.plans[static_cast<std::size_t>(a.best)].total_cost);
      CHECK(r.plan.terminal == a.plans[static_cast<std::size_t>(a.best)].terminal);
      CHECK(r.objective == r.plan_cost + r.anticipated);
      CHECK(r.anticipated == est->estimate(*domain, r.plan.terminal));
    }
  }
}

TEST_CASE("widening the candidate pool can only improve the objective") {
  const auto domain = small_floor();
  Rng rng(derive_seed(42, "state"));
  const WorldState w = domain->random_state(rng);
  const Task t = domain->task_distribution().entries[0].task;

  PlannerConfig narrow;
  narrow.candidate_count = 6;
  narrow.seed = 5;
  PlannerConfig wide = narrow;
  wide.candidate_count = 18;

  // Same seed: the narrow stream is a prefix of the wide one.
  const auto& est = zero_estimator();
  const PlannerResult a = anticipatory_tamp(*domain, w, t, est, narrow);
  const PlannerResult b = anticipatory_tamp(*domain, w, t, est, wide);
  CHECK(b.objective <= a.objective);
}

TEST_CASE("ties go to the later candidate") {
  const auto domain = small_floor();
  const auto* namo = dynamic_cast<const NamoDomain*>(domain.get());
  WorldState w = domain->scenario().initial_state();

  // A satisfied task makes every candidate an empty zero-cost plan.
  const Task t = namo->reach_task(EntityId{2});
  w.symbolic.reached = EntityId{2};
  REQUIRE(task_satisfied(t, w));

  PlannerConfig cfg;
  cfg.candidate_count = 7;
  const PlannerResult r = anticipatory_tamp(*domain, w, t, zero_estimator(), cfg);
  CHECK(r.chosen_index == 6);
  CHECK(r.plan.empty());
  CHECK(r.objective == 0.0);
}

TEST_CASE("the planner rejects an empty candidate budget") {
  const auto domain = small_floor();
  const WorldState w = domain->scenario().initial_state();
  const Task t = domain->task_distribution().entries[0].task;
  PlannerConfig cfg;
  cfg.candidate_count = 0;
  CHECK_THROWS_AS(anticipatory_tamp(*domain, w, t, zero_estimator(), cfg),
                  std::invalid_argument);
}

TEST_CASE("the acceptance rule is exact about signs and boundaries") {
  // Improvements pass without consuming luck.
  CHECK(anneal_accept(-1.0, 5.0, 0.999999));
  CHECK(anneal_accept(-1e-300, 1000.0, 0.999999));

  // Zero delta: exp(0) = 1, so any u in [0,1) passes.
  CHECK(anneal_accept(0.0, 1000.0, 0.0));
  CHECK(anneal_accept(0.0, 1000.0, 0.999999));
  CHECK_FALSE(anneal_accept(0.0, 1000.0, 1.0));

  // Uphill: pass iff u < exp(-delta/T), strictly.
  const double delta = 3.0, temp = 10.0;
  const double threshold = std::exp(-delta / temp);
  CHECK(anneal_accept(delta, temp, threshold - 1e-9));
  CHECK_FALSE(anneal_accept(delta, temp, threshold));
  CHECK_FALSE(anneal_accept(delta, temp, threshold + 1e-9));

  // Hopeless climbs are rejected even with u = 0.
  CHECK_FALSE(anneal_accept(1e6, 1.0, 0.0));
}

TEST_CASE("annealing cools geometrically and logs every step") {
  const auto domain = small_floor();
  const WorldState w = domain->scenario().initial_state();

  std::vector<PrepObservation> trace;
  PrepareConfig cfg;
  cfg.schedule.initial_temperature = 1000.0;
  cfg.schedule.cooling_rate = 0.95;
  cfg.schedule.iterations = 50;
  cfg.seed = 4;
  cfg.observer = [&](const PrepObservation& o) { trace.push_back(o); };

  const PrepareResult res = prepare(*domain, w, zero_estimator(), cfg);

  REQUIRE(trace.size() == 50);
  double t = 1000.0;
  for (int i = 0; i < 50; ++i) {
    CHECK(trace[static_cast<std::size_t>(i)].iteration == i);
    CHECK(trace[static_cast<std::size_t>(i)].temperature == t);
    t *= 0.95;
  }

  // A flat landscape: every move is a zero-delta acceptance, and the best
  // state is never displaced from the input.
  for (const auto& o : trace) {
    CHECK(o.delta == 0.0);
    CHECK(o.accepted);
    CHECK(o.current_value == 0.0);
  }
  CHECK(res.accepted == 50);
  CHECK(res.value == 0.0);
  CHECK(res.initial_value == 0.0);
  CHECK(res.state == w);
}

TEST_CASE("preparation lowers the estimate without touching the symbols") {
  const auto domain = small_floor();
  const WorldState w = domain->scenario().initial_state();

  OracleParams op;
  op.samples_per_task = 3;
  const OracleEstimator oracle(*domain, op);

  PrepareConfig cfg;
  cfg.schedule.iterations = 40;
  cfg.seed = 6;
  const PrepareResult res = prepare(*domain, w, oracle, cfg);

  CHECK(res.value <= res.initial_value);
  CHECK(res.value == oracle.estimate(*domain, res.state));
  CHECK(res.initial_value == oracle.estimate(*domain, w));
  CHECK(res.accepted >= 0);
  CHECK(res.accepted <= 40);

  domain->validate_state(res.state);
  CHECK(res.state.symbolic == w.symbolic);
  CHECK(res.state.poses[0].x == w.poses[0].x);
  CHECK(res.state.poses[0].y == w.poses[0].y);

  // Same seed, same trajectory; zero iterations, no movement at all.
  const PrepareResult rerun = prepare(*domain, w, oracle, cfg);
  CHECK(rerun.state == res.state);
  CHECK(rerun.value == res.value);

  PrepareConfig frozen = cfg;
  frozen.schedule.iterations = 0;
  const PrepareResult still = prepare(*domain, w, oracle, frozen);
  CHECK(still.state == w);
  CHECK(still.accepted == 0);
  CHECK(still.value == still.initial_value);
}

TEST_CASE("preparation refuses an invalid starting state") {
  const auto domain = small_floor();
  WorldState w = domain->scenario().initial_state();
  w.poses[2] = w.poses[1];  // two blocks in the same spot
  PrepareConfig cfg;
  cfg.schedule.iterations = 5;
  CHECK_THROWS_AS(prepare(*domain, w, zero_estimator(), cfg), PlanError);
}
