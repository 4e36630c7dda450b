#include <benchmark/benchmark.h>

#include "ptrotor/cavity.hpp"
#include "ptrotor/dynamics.hpp"
#include "ptrotor/floquet.hpp"
#include "ptrotor/resonance.hpp"

using namespace ptrotor;

namespace {

void BM_FloquetSpectrum(benchmark::State& state) {
  const RotorParams p(3.0, 0.1, 0.7 / (2 * kPi), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pt_detector(p));
  state.SetComplexityN(p.dimension());
}
BENCHMARK(BM_FloquetSpectrum)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_KickStep(benchmark::State& state) {
  const int ns = static_cast<int>(state.range(0));
  const RotorParams p(3.0, 1.0 / 30, 1.0 / (4 * kPi), ns);
  KickPropagator prop(p);
  MomentumState s = MomentumState::localized(ns);
  for (auto _ : state) {
    prop.step(s);
    // Keep the state bounded so long runs never trip the spill guard.
    if (s.kick_count % 50 == 0) s = MomentumState::localized(ns);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KickStep)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_ExactResonanceState(benchmark::State& state) {
  const RotorParams p(3.0, 0.1, 1.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(exact_resonance_state(p, state.range(0)));
}
BENCHMARK(BM_ExactResonanceState)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CavityRoundTrip(benchmark::State& state) {
  const CavityConfig cfg = cavity_preset("fig6");
  CavityPropagator prop(cfg);
  TransverseField field = initial_gaussian(cfg);
  const TransverseField start = field;
  for (auto _ : state) {
    prop.roundtrip(field);
    if (field.round_trip >= 20) field = start;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CavityRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
