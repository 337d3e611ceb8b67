// Serial reference against the OpenMP backend for each Monte Carlo kernel.

#include <benchmark/benchmark.h>

#include "displab/kernels.hpp"
#include "displab/parallel.hpp"

using namespace displab;
using parallel::ExecPolicy;

namespace {

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial() : ExecPolicy::openmp(int(state.range(0)));
}

void BM_BallMoments(benchmark::State& state) {
  const RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::ball_moments(10, 1.0, 20000, rng, policy(state)));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_MinSingular(benchmark::State& state) {
  const RngStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scaled_min_singular(10, 1000, rng, policy(state)));
  state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_HitAndRun(benchmark::State& state) {
  const RngStream rng(3);
  const auto cube = geom::HPolytope::cube(16);
  const kernels::ChainPlan plan{16, 200, 1600, 16};
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::hit_and_run_norm_sq(cube, geom::Vector(16, 0.0), plan, rng, policy(state)));
  state.SetItemsProcessed(state.iterations() * 16 * 200);
}

void BM_Rejection(benchmark::State& state) {
  const RngStream rng(4);
  const auto cube = geom::HPolytope::cube(8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::rejection_norm_sq(cube, 20000, rng, policy(state)));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_ProbeLeaves(benchmark::State& state) {
  const RngStream rng(5);
  const auto queries = kernels::axis_probe_queries(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::probe_leaves(3, queries, 50000, rng, policy(state)));
  state.SetItemsProcessed(state.iterations() * 50000);
}

// Argument: 0 for the serial reference, otherwise the OpenMP thread count.
#define DISPLAB_BENCH(fn) BENCHMARK(fn)->ArgName("threads")->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond)

DISPLAB_BENCH(BM_BallMoments);
DISPLAB_BENCH(BM_MinSingular);
DISPLAB_BENCH(BM_HitAndRun);
DISPLAB_BENCH(BM_Rejection);
DISPLAB_BENCH(BM_ProbeLeaves);

}  // namespace

BENCHMARK_MAIN();
