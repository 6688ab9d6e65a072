#include <benchmark/benchmark.h>

#include "anttamp/estimators.hpp"
#include "anttamp/namo.hpp"
#include "anttamp/oracle.hpp"
#include "anttamp/planner.hpp"

using namespace anttamp;

static void BM_PrepareMechanics(benchmark::State& state) {
  const auto domain = make_domain(make_namo_scenario({}));
  Rng rng(derive_seed(5, "bench-state"));
  const WorldState w = domain->random_state(rng);
  PrepareConfig pc;
  pc.schedule.iterations = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    pc.seed = seed++;
    benchmark::DoNotOptimize(prepare(*domain, w, zero_estimator(), pc).accepted);
  }
}
BENCHMARK(BM_PrepareMechanics)->Arg(100)->Arg(1000);

static void BM_PrepareOracle(benchmark::State& state) {
  const auto domain = make_domain(make_namo_scenario({}));
  Rng rng(derive_seed(5, "bench-state"));
  const WorldState w = domain->random_state(rng);
  OracleParams op;
  op.samples_per_task = 1;
  const OracleEstimator est(*domain, op);
  PrepareConfig pc;
  pc.schedule.iterations = 10;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    pc.seed = seed++;
    benchmark::DoNotOptimize(prepare(*domain, w, est, pc).value);
  }
}
BENCHMARK(BM_PrepareOracle);

BENCHMARK_MAIN();
