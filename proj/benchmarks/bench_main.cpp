#include <benchmark/benchmark.h>

#include "hyperspec/hyperspec.hpp"

using namespace hyperspec;

static void BM_TensorApply(benchmark::State& state) {
  const auto graph = gen_beta_star(3, static_cast<std::size_t>(state.range(0)));
  const SpectralObjective objective(graph, 3.0);
  auto rng = run_rng(1, 0);
  const auto x = random_unit_sphere(graph.num_vertices(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(objective.apply(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(graph.slots().size()));
}
BENCHMARK(BM_TensorApply)->RangeMultiplier(10)->Range(100, 100000);

static void BM_Gradient(benchmark::State& state) {
  const auto graph = gen_loose_path(4, static_cast<std::size_t>(state.range(0)));
  const SpectralObjective objective(graph, 4.0);
  auto rng = run_rng(2, 0);
  const auto x = random_unit_sphere(graph.num_vertices(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(objective.gradient(x));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(10)->Range(100, 100000);

static void BM_SolveSingleBetaStar(benchmark::State& state) {
  const auto graph = gen_beta_star(3, static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.p = 3.0;
  const SpectralObjective objective(graph, cfg.p);
  auto rng = run_rng(3, 0);
  const auto x0 = random_unit_sphere(graph.num_vertices(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_single(objective, cfg, x0));
}
BENCHMARK(BM_SolveSingleBetaStar)->Arg(10)->Arg(200)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Multistart(benchmark::State& state) {
  const auto graph = gen_complete(10, 3);
  SolverConfig cfg;
  cfg.runs = 100;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_multistart(graph, cfg));
}
BENCHMARK(BM_Multistart)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
