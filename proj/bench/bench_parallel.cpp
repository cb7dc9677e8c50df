// Serial against OpenMP timings for completion and theta enumeration.

#include <benchmark/benchmark.h>

#include "../tests/fixtures.hpp"

using namespace hs;

namespace {

void BM_Complete(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  CompletionOptions opt;
  opt.parallel = state.range(1) != 0;
  auto initial = build_initial(fx::two_lines(N, 1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(complete(initial, N, opt));
}

void BM_Thetas(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  ThetaOptions opt;
  opt.parallel = state.range(1) != 0;
  auto bd = fx::two_lines(N, 1, 2);
  auto heart = fx::heart_of(bd);
  ThetaContext ctx{&heart, &bd.fan, &bd.phi0};
  QVec p = default_endpoint(bd.fan, bd.phi0.base_cone());
  for (auto _ : state)
    for (auto& m : bd.fan.rays()) benchmark::DoNotOptimize(theta(ctx, m, p, N, opt));
}

}  // namespace

BENCHMARK(BM_Complete)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Thetas)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
