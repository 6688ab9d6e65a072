#include <benchmark/benchmark.h>

#include "anttamp/cabinet.hpp"
#include "anttamp/namo.hpp"
#include "anttamp/solver.hpp"

using namespace anttamp;

static void BM_NamoSolve(benchmark::State& state) {
  NamoScenarioParams p;
  p.object_count = static_cast<int>(state.range(0));
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(7, "bench-state"));
  const WorldState w = domain->random_state(rng);
  const TaskDistribution dist = domain->task_distribution();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto& task = dist.entries[seed % dist.entries.size()].task;
    benchmark::DoNotOptimize(tamp_solve(*domain, w, task, seed++).total_cost);
  }
}
BENCHMARK(BM_NamoSolve)->Arg(3)->Arg(10)->Arg(20);

static void BM_CabinetSolve(benchmark::State& state) {
  CabinetScenarioParams p;
  p.per_class = static_cast<int>(state.range(0));
  const auto domain = make_domain(make_cabinet_scenario(p));
  Rng rng(derive_seed(7, "bench-state"));
  const WorldState w = domain->random_state(rng);
  const TaskDistribution dist = domain->task_distribution();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto& task = dist.entries[seed % dist.entries.size()].task;
    benchmark::DoNotOptimize(tamp_solve(*domain, w, task, seed++).total_cost);
  }
}
BENCHMARK(BM_CabinetSolve)->Arg(2)->Arg(3);

static void BM_NamoCandidates(benchmark::State& state) {
  NamoScenarioParams p;
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(7, "bench-state"));
  const WorldState w = domain->random_state(rng);
  const auto& task = domain->task_distribution().entries.front().task;
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_goal_states(*domain, w, task, seed++, n).size());
  }
}
BENCHMARK(BM_NamoCandidates)->Arg(10)->Arg(100);
