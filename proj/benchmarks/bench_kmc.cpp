#include <benchmark/benchmark.h>

#include <kawasaki/kmc.hpp>

using namespace kawasaki;

namespace {

KernelSpec demo_kernels(int d) {
  return KernelSpec(RadialProfile(KernelFamily::TopHat, 1.0 / ball_volume(d, 1.125), 1.125, d),
                    RadialProfile(KernelFamily::TopHat, 0.5 / ball_volume(d, 0.375), 0.375, d));
}

// Cost of one thinned event as the system grows; the cell list keeps it flat.
void BM_KmcStep(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0));
  const TorusDomain dom(2, side);
  CounterRng init(1);
  kmc::SimState sim(dom, demo_kernels(2), kmc::poisson_configuration(dom, 0.3, init), CounterRng(2));
  for (auto _ : state) sim.step();
  state.counters["particles"] = static_cast<double>(sim.config().size());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KmcStep)->Arg(20)->Arg(80)->Arg(320);

void BM_BruteForceAcceptance(benchmark::State& state) {
  const TorusDomain dom(2, static_cast<double>(state.range(0)));
  CounterRng init(1);
  const kmc::SimState sim(dom, demo_kernels(2), kmc::poisson_configuration(dom, 0.3, init), CounterRng(2));
  const Point y = sim.config()[0].position;
  for (auto _ : state) benchmark::DoNotOptimize(sim.acceptance_probability_bruteforce(0, y));
}
BENCHMARK(BM_BruteForceAcceptance)->Arg(20)->Arg(80)->Arg(320);

}  // namespace
