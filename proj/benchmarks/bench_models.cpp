#include <benchmark/benchmark.h>

#include "dgsmlab/models.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

static void BM_EvaluateRows(benchmark::State& state, ModelPtr model, InputSpace space) {
  const auto x = transform(generate_unit(Generator::MonteCarlo, 10000, space.dimension(), 1), space);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model->evaluate_rows(x, workers));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * x.rows()));
}
BENCHMARK_CAPTURE(BM_EvaluateRows, flood_overflow, flood_overflow(), flood_input_space())
    ->Arg(1)->Arg(4);
BENCHMARK_CAPTURE(BM_EvaluateRows, flood_cost, flood_cost(), flood_input_space())->Arg(1);
BENCHMARK_CAPTURE(BM_EvaluateRows, morris, morris_function(), morris_input_space())
    ->Arg(1)->Arg(4);

static void BM_Gradients(benchmark::State& state, GradientMethod method) {
  const auto space = morris_input_space();
  const auto x = transform(generate_unit(Generator::MonteCarlo, 2000, 20, 1), space);
  const auto model = morris_function();
  for (auto _ : state) benchmark::DoNotOptimize(gradients(*model, x, method));
}
BENCHMARK_CAPTURE(BM_Gradients, analytic, GradientMethod::analytic());
BENCHMARK_CAPTURE(BM_Gradients, forward, GradientMethod::forward());
BENCHMARK_CAPTURE(BM_Gradients, central, GradientMethod::central());

BENCHMARK_MAIN();
