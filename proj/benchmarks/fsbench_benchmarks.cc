#include <benchmark/benchmark.h>

#include <vector>

#include "fsbench/csv.h"
#include "fsbench/experiment.h"
#include "fsbench/importance.h"
#include "fsbench/models.h"
#include "fsbench/rng.h"
#include "fsbench/shift.h"

namespace {

using namespace fsbench;

std::vector<double> random_column(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform_unit();
  return v;
}

void BM_Pearson(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_column(n, 1), y = random_column(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pearson(x, y).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pearson)->Range(64, 1 << 16);

void BM_PlanRandom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(plan_random(n, 0.5, 7).subsets.size());
}
BENCHMARK(BM_PlanRandom)->Arg(8)->Arg(16)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_CartFitIris(benchmark::State& state) {
  const Dataset iris = load_csv(std::string(FSBENCH_BENCH_DATA_DIR) + "/iris.csv", "iris");
  const ModelSpec spec = parse_model_spec("cart");
  for (auto _ : state) benchmark::DoNotOptimize(fit_model(spec, iris));
}
BENCHMARK(BM_CartFitIris)->Unit(benchmark::kMicrosecond);

void BM_IrisRandomGrid(benchmark::State& state) {
  ExperimentConfig c;
  c.datasets = {"iris"};
  c.data_dir = FSBENCH_BENCH_DATA_DIR;
  c.models = {"cart", "logistic"};
  c.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).records.size());
}
BENCHMARK(BM_IrisRandomGrid)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
