// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "cadwmr/dataset.hpp"
#include "cadwmr/oracles.hpp"
#include "cadwmr/sweep.hpp"
#include "cadwmr/training.hpp"

using namespace cadwmr;

namespace {

std::vector<PointSpec> reversal_sweep(int points) {
  SweepConfig cfg;
  cfg.family = StateFamily::werner(0.8);
  cfg.eta = 0.5;
  cfg.mode = WmrMode::TwoQubit;
  cfg.variable = SweepVariable::Q;
  cfg.points = points;
  return sweep_points(cfg, nullptr);
}

void BM_EvaluatePoints(benchmark::State& state, bool parallel) {
  const std::vector<PointSpec> specs = reversal_sweep(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto rows = parallel ? evaluate_points_parallel(specs) : evaluate_points_serial(specs);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DisturbanceGrid(benchmark::State& state, bool parallel) {
  oracle::Rng rng(5);
  const DensityMatrix4 x = oracle::random_x_state(rng);
  const oracle::GridSpec grid{static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))};
  for (auto _ : state) {
    auto m = parallel ? oracle::disturbance_grid_parallel(x.matrix(), grid)
                      : oracle::disturbance_grid_serial(x.matrix(), grid);
    benchmark::DoNotOptimize(m.value);
  }
}

void BM_RestartSearch(benchmark::State& state, bool parallel) {
  const nn::RegressionData data = build_dataset(StateFamily::bell(), Scenario::NoWmr, 0.0, 200).regression_data();
  nn::TrainConfig cfg;
  cfg.max_epochs = 20;
  for (auto _ : state) {
    auto m = nn::restart_search(data, static_cast<int>(state.range(0)), 7, cfg, nn::regression_architecture(), parallel);
    benchmark::DoNotOptimize(m.report.mse_test);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_EvaluatePoints, serial, false)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_EvaluatePoints, parallel, true)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_DisturbanceGrid, serial, false)->Arg(180)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_DisturbanceGrid, parallel, true)->Arg(180)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_RestartSearch, serial, false)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_RestartSearch, parallel, true)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
