#include <benchmark/benchmark.h>

#include <kawasaki/hierarchy.hpp>

using namespace kawasaki;

namespace {

void BM_ApplyLdelta(benchmark::State& state) {
  const Lattice lat(1, static_cast<int>(state.range(0)), 0.25);
  const KernelSpec kern(RadialProfile(KernelFamily::TopHat, 1.0 / 2.25, 1.125, 1),
                        RadialProfile(KernelFamily::TopHat, 0.5 / 0.75, 0.375, 1));
  const Hierarchy h(lat, kern);
  const auto mode = state.range(1) == 0 ? FieldMode::TranslationInvariant : FieldMode::FullGrid;
  const auto k = CorrelationField::constant(lat, mode, ClosureRule{ClosureKind::PoissonTail, 2}, 2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(h.apply_Ldelta(k));
}
BENCHMARK(BM_ApplyLdelta)->Args({32, 0})->Args({128, 0})->Args({32, 1})->Args({64, 1});

}  // namespace
