// SPDX-License-Identifier: Apache-2.0
// OpenMP kernels against their serial references.
#include "support.hpp"

#include "v2gsim/baselines/brute_force.hpp"
#include "v2gsim/parallel/batch.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace v2g;

namespace {

parallel::BatchSpec batch_spec(int runs) {
  parallel::BatchSpec spec;
  spec.config = default_config();
  spec.config.chargers = uniform_chargers(20, station::ChargerSpec{}, 1);
  spec.algorithms = {"afap", "rr"};
  spec.runs = runs;
  spec.seed_base = 100;
  return spec;
}

// One EVSE connected for `steps` steps: 5^steps plans.
Replay oracle_instance(int steps) {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, steps + 1);
  auto s = testing::session_at(0, testing::linear_spec(60.0, false), 1,
                               steps + 1, 20.0, 50.0);
  return testing::make_replay(cfg, {s}, {0.0, 3.0, 7.0, 12.0, 5.0, 9.0, 4.0, 6.0});
}

const double kLevels[] = {0.0, 8.0, 16.0, 24.0, 32.0};

void BM_BatchSerial(benchmark::State &st) {
  auto spec = batch_spec(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel::run_batch_serial(spec));
  st.SetItemsProcessed(st.iterations() * st.range(0) * 2);
}

void BM_BatchParallel(benchmark::State &st) {
  auto spec = batch_spec(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel::run_batch(spec));
  st.SetItemsProcessed(st.iterations() * st.range(0) * 2);
  st.counters["threads"] = omp_get_max_threads();
}

void BM_OracleSerial(benchmark::State &st) {
  auto r = oracle_instance(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(baselines::brute_force_oracle_serial(r, kLevels));
}

void BM_OracleParallel(benchmark::State &st) {
  auto r = oracle_instance(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(baselines::brute_force_oracle(r, kLevels));
  st.counters["threads"] = omp_get_max_threads();
}

} // namespace

BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
