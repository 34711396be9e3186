#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mprofile/anytime_runtime.hpp"
#include "mprofile/diagonal_engine.hpp"
#include "mprofile/partition_planner.hpp"
#include "mprofile/profile_analytics.hpp"
#include "mprofile/window_stats.hpp"

namespace {

mprofile::TimeSeries walk_series(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> step;
  std::vector<double> v(n);
  double x = 0.0;
  for (auto& s : v) s = x += step(rng);
  return mprofile::TimeSeries::from_values(std::move(v));
}

void BM_ComputeStats(benchmark::State& state) {
  const auto ts = walk_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::compute_stats(ts, 64));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeStats)->Arg(1 << 14)->Arg(1 << 18);

void BM_ComputeStatsRolling(benchmark::State& state) {
  const auto ts = walk_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::compute_stats_rolling(ts.values(), 64));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeStatsRolling)->Arg(1 << 14)->Arg(1 << 18);

// One long diagonal segment; items are cells.
void BM_TraverseSegment(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const auto ts = walk_series(1 << 16);
  const auto st = mprofile::compute_stats(ts, m);
  mprofile::LocalProfile lp(st.size());
  const mprofile::DiagonalSegment seg{m, 0, 4096};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::traverse_segment(seg, ts.values(), st, lp));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * seg.length);
}
BENCHMARK(BM_TraverseSegment)->Arg(16)->Arg(256)->Arg(1024);

void BM_Plan(benchmark::State& state) {
  const std::size_t n_sub = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::plan(n_sub, 16, 8, 4096, 1));
  }
}
BENCHMARK(BM_Plan)->Arg(1 << 14)->Arg(1 << 17);

void BM_Run(benchmark::State& state) {
  const auto ts = walk_series(static_cast<std::size_t>(state.range(0)));
  auto cfg = mprofile::RunConfig::defaults_for(64);
  cfg.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::run(ts, cfg));
  }
}
BENCHMARK(BM_Run)->Args({8192, 1})->Args({8192, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TopDiscords(benchmark::State& state) {
  const auto ts = walk_series(8192);
  auto cfg = mprofile::RunConfig::defaults_for(64);
  cfg.workers = 1;
  const auto mp = mprofile::run(ts, cfg).profile;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mprofile::top_discords(mp, 10, cfg.ez));
  }
}
BENCHMARK(BM_TopDiscords);

}  // namespace

BENCHMARK_MAIN();
