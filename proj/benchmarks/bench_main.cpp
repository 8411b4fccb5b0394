#include <benchmark/benchmark.h>

#include "supnorm/change_point.hpp"
#include "supnorm/dgp.hpp"
#include "supnorm/two_sample.hpp"

namespace {

using namespace supnorm;

const Grid& grid() {
  static const Grid g = Grid::uniform();
  return g;
}

const BSplineBasis& basis() {
  static const BSplineBasis b = BSplineBasis::clamped_uniform(21, 3, grid());
  return b;
}

CurveSet series(std::size_t n, std::uint64_t seed) {
  const FtsConfig cfg = FtsConfig::standard(ProcessKind::kFma1, 21, 0.5, {seed, 1});
  return CurveSet(grid(), gen_error_curves(n, cfg, basis(), {seed, 2}));
}

void BM_GenSeries(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FtsConfig cfg = FtsConfig::standard(ProcessKind::kFma1, 21, 0.5, {1, 1});
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_error_curves(n, cfg, basis(), {1, ++stream}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenSeries)->Arg(100)->Arg(500);

void BM_RelevantTwoSample(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const TwoSampleData data(series(m, 1), series(2 * m, 2));
  BootConfig2S cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relevant_test_2s(data, cfg, 0.1, 0.05));
  }
}
BENCHMARK(BM_RelevantTwoSample)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ClassicalChangePoint(benchmark::State& state) {
  const CurveSet s = series(static_cast<std::size_t>(state.range(0)), 3);
  CpConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical_cp_test(s, cfg, 0.05));
  }
}
BENCHMARK(BM_ClassicalChangePoint)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RelevantChangePoint(benchmark::State& state) {
  const CurveSet s = series(static_cast<std::size_t>(state.range(0)), 4);
  CpConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relevant_cp_test(s, cfg, 0.4, 0.05));
  }
}
BENCHMARK(BM_RelevantChangePoint)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
