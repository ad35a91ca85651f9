#include <benchmark/benchmark.h>

#include "bknn/bknn.hpp"
#include "bknn/bootstrap.hpp"
#include "bknn/experiment.hpp"
#include "bknn/knn.hpp"
#include "bknn/sim_model.hpp"

using namespace bknn;

namespace {

LabeledDataset study_data(std::size_t n) {
  Rng rng(20090717);
  return sample_training(MixtureClassModel{}, n, rng);
}

void BM_FindNeighbors(benchmark::State &state) {
  const auto data = study_data(static_cast<std::size_t>(state.range(0)));
  const Point2 x{0.1, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(find_neighbors(data, x, 10));
}
BENCHMARK(BM_FindNeighbors)->Arg(250)->Arg(1000);

void BM_NeighborTable(benchmark::State &state) {
  const auto data = study_data(250);
  for (auto _ : state)
    benchmark::DoNotOptimize(NeighborTable::for_training(data, 249));
}
BENCHMARK(BM_NeighborTable)->Unit(benchmark::kMillisecond);

void BM_LogPseudoLikelihood(benchmark::State &state) {
  const auto data = study_data(250);
  const PseudoLikelihood pl(data);
  const HyperState s{static_cast<int>(state.range(0)), 1.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(pl.log_value(s));
}
BENCHMARK(BM_LogPseudoLikelihood)->Arg(5)->Arg(50);

void BM_MhRun(benchmark::State &state) {
  const auto data = study_data(250);
  const PseudoLikelihood pl(data);
  McmcSettings settings;
  settings.n_retained = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(mh_run(pl, settings, rng));
  }
}
BENCHMARK(BM_MhRun)->Arg(2000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_CvChooseK(benchmark::State &state) {
  const auto data = study_data(250);
  const auto grid = default_k_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(cv_choose_k(data, grid));
}
BENCHMARK(BM_CvChooseK)->Unit(benchmark::kMillisecond);

void BM_BootstrapIntervals(benchmark::State &state) {
  const auto data = study_data(250);
  const auto locs = build_test_grid(MixtureClassModel{}).locations();
  BootstrapSettings settings;
  settings.n_resamples = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_intervals(data, locs, settings, Rng(2)));
}
BENCHMARK(BM_BootstrapIntervals)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Replicate(benchmark::State &state) {
  const auto config = ExperimentConfig::reduced();
  const auto grid = build_test_grid(MixtureClassModel{});
  for (auto _ : state)
    benchmark::DoNotOptimize(run_replicate(config, grid, 0));
}
BENCHMARK(BM_Replicate)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
