#include <benchmark/benchmark.h>

#include <numbers>

#include "rydgate/blockade.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/optimize.hpp"
#include "rydgate/params.hpp"
#include "rydgate/pulses.hpp"

using namespace rydgate;

namespace {

constexpr double kPi = std::numbers::pi;

PulseShape control_drag(double duration) {
  const auto s = load_setting("S1");
  const std::vector<double> nulls{s.delta_p1_half, s.delta_p3_half};
  return calibrate_area(drag_shape(duration, nulls), kPi);
}

void BM_EnvelopeDrag(benchmark::State& state) {
  const EnvelopeEvaluator eval(control_drag(15.0));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(t));
    t = t > 15.0 ? 0.0 : t + 0.013;
  }
}
BENCHMARK(BM_EnvelopeDrag);

void BM_EnvelopeGaussian(benchmark::State& state) {
  const EnvelopeEvaluator eval(calibrate_area(gaussian_shape(30.0, 2), 2 * kPi));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(t));
    t = t > 30.0 ? 0.0 : t + 0.013;
  }
}
BENCHMARK(BM_EnvelopeGaussian);

void BM_SpectrumAtNull(benchmark::State& state) {
  const auto p = control_drag(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(p, p.null_frequencies[0]));
}
BENCHMARK(BM_SpectrumAtNull)->Arg(15)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_GateUnitary(benchmark::State& state) {
  const auto s = load_setting("S1");
  const auto spec = SequenceSpec::make(static_cast<double>(state.range(0)), 0.5, PulseKind::drag);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_gate(spec, s, Model::unitary));
}
BENCHMARK(BM_GateUnitary)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GateLindbladBell(benchmark::State& state) {
  const auto s = load_setting("S1");
  const auto spec = SequenceSpec::make(30.0, 1.0 / 3.0, PulseKind::drag);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_gate(spec, s, Model::lindblad, {}, MetricSelection{false, true}));
  }
}
BENCHMARK(BM_GateLindbladBell)->Unit(benchmark::kSecond)->Iterations(1);

void BM_OptimalBlockade(benchmark::State& state) {
  const auto model = LeakModel::from_setting(load_setting("S2"));
  for (auto _ : state) benchmark::DoNotOptimize(optimal_blockade(model));
}
BENCHMARK(BM_OptimalBlockade)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
