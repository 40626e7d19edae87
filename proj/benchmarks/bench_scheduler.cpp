#include <benchmark/benchmark.h>

#include <kawasaki/lambert_w.hpp>
#include <kawasaki/scheduler.hpp>

using namespace kawasaki;

namespace {

void BM_LambertW0(benchmark::State& state) {
  double x = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w0(x));
    x = x < 1e8 ? x * 1.37 : 1e-8;
  }
}
BENCHMARK(BM_LambertW0);

void BM_BuildLadder(benchmark::State& state) {
  ScaleParams p;
  p.alpha = 0.2;
  p.mean_phi = 0.5;
  p.C = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(build_ladder(p, 10.0));
}
BENCHMARK(BM_BuildLadder);

}  // namespace
BENCHMARK_MAIN();
