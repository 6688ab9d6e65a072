#include <benchmark/benchmark.h>

#include "anttamp/dataset.hpp"
#include "anttamp/gnn.hpp"
#include "anttamp/namo.hpp"
#include "anttamp/oracle.hpp"
#include "anttamp/scene_graph.hpp"

using namespace anttamp;

namespace {

const Domain& bench_domain() {
  static auto d = make_domain(make_namo_scenario({}));
  return *d;
}

// Small model trained once; prediction speed does not depend on fit quality.
const GnnModel& bench_model() {
  static GnnModel m = [] {
    DatasetGenParams p;
    p.count = 48;
    p.seed = 11;
    p.oracle.samples_per_task = 2;
    const Dataset ds = generate_dataset(bench_domain(), p);
    TrainParams tp;
    tp.epochs = 1;
    tp.hidden = 32;
    return train_model(ds, tp);
  }();
  return m;
}

}  // namespace

static void BM_EncodeState(benchmark::State& state) {
  const Domain& d = bench_domain();
  Rng rng(derive_seed(3, "bench-state"));
  const WorldState w = d.random_state(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_state(d, w).node_count);
  }
}
BENCHMARK(BM_EncodeState);

static void BM_Predict(benchmark::State& state) {
  const Domain& d = bench_domain();
  const GnnModel& m = bench_model();
  Rng rng(derive_seed(3, "bench-state"));
  const SceneGraph g = encode_state(d, d.random_state(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(m, g));
  }
}
BENCHMARK(BM_Predict);

static void BM_OracleValue(benchmark::State& state) {
  const Domain& d = bench_domain();
  Rng rng(derive_seed(3, "bench-state"));
  const WorldState w = d.random_state(rng);
  const TaskDistribution dist = d.task_distribution();
  OracleParams op;
  op.samples_per_task = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_vap(d, w, dist, op));
  }
}
BENCHMARK(BM_OracleValue)->Arg(1)->Arg(5);
