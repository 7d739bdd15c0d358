#include <benchmark/benchmark.h>

#include "dgsmlab/distributions.hpp"

using namespace dgsmlab;

static void BM_CheegerNumeric(benchmark::State& state, Marginal m) {
  for (auto _ : state) benchmark::DoNotOptimize(cheeger_numeric(m, 1e-8));
}
BENCHMARK_CAPTURE(BM_CheegerNumeric, exponential, Marginal{Exponential(4)});
BENCHMARK_CAPTURE(BM_CheegerNumeric, weibull, Marginal{Weibull(2, 0.5)});
BENCHMARK_CAPTURE(BM_CheegerNumeric, truncated_gumbel, Marginal{TruncatedGumbel(1013, 558, 500, 3000)});
BENCHMARK_CAPTURE(BM_CheegerNumeric, triangular, Marginal{Triangular(49, 50, 51)});
BENCHMARK_CAPTURE(BM_CheegerNumeric, beta, Marginal{Beta(2, 5)});

static void BM_PoincareConstantSharp(benchmark::State& state) {
  const Marginal m = Normal(0.5, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(poincare_constant(m));
}
BENCHMARK(BM_PoincareConstantSharp);

BENCHMARK_MAIN();
