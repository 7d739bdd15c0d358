#include <benchmark/benchmark.h>

#include "dgsmlab/models.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

static void BM_SobolPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_unit(Generator::SobolSequence, n, d, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * d));
}
BENCHMARK(BM_SobolPoints)->Args({10000, 8})->Args({10000, 40})->Args({100000, 8});

static void BM_MonteCarloPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_unit(Generator::MonteCarlo, n, 8, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * 8));
}
BENCHMARK(BM_MonteCarloPoints)->Arg(10000)->Arg(100000);

static void BM_LatinHypercube(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_unit(Generator::LatinHypercube, 10000, 8, 1));
  }
}
BENCHMARK(BM_LatinHypercube);

static void BM_PickFreezeFlood(benchmark::State& state) {
  const auto space = flood_input_space();
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ua = generate_unit(Generator::MonteCarlo, n, 8, 1);
  const auto ub = generate_unit(Generator::MonteCarlo, n, 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pick_freeze(ua, ub, space));
}
BENCHMARK(BM_PickFreezeFlood)->Arg(10000);

BENCHMARK_MAIN();
