#include <benchmark/benchmark.h>

#include "splittree/mutation.hpp"
#include "splittree/scale.hpp"
#include "splittree/simulate.hpp"

using namespace splittree;

namespace {

MutationContext bd_quarter() {
  return {LifespanMeasure::exponential(1.0, 2.0), 0.25};
}

void BM_solve_scale(benchmark::State& state) {
  auto m = LifespanMeasure::exponential(1.0, 2.0);
  double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto grid = solve_scale(m, horizon, 1e-3);
    benchmark::DoNotOptimize(grid.values.back());
  }
}
BENCHMARK(BM_solve_scale)->Arg(5)->Arg(10)->Arg(20);

void BM_iterated_convolution(benchmark::State& state) {
  auto ctx = bd_quarter();
  auto gwc = clonal_grid(ctx, 10.0, 1e-3);
  int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto conv = iterated_convolution(gwc.derivatives, gwc.step, order);
    benchmark::DoNotOptimize(conv.values.back());
  }
}
BENCHMARK(BM_iterated_convolution)->Arg(2)->Arg(3)->Arg(4);

void BM_simulate(benchmark::State& state) {
  auto ctx = bd_quarter();
  double horizon = static_cast<double>(state.range(0));
  std::uint64_t r = 0;
  std::uint64_t births = 0;
  for (auto _ : state) {
    CounterRng rng = CounterRng::for_stream(42, r++);
    auto snap = simulate(ctx, horizon, rng);
    births += snap.births_total;
    benchmark::DoNotOptimize(snap.alive.size());
  }
  state.counters["births/iter"] =
      static_cast<double>(births) / static_cast<double>(state.iterations());
}
BENCHMARK(BM_simulate)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
