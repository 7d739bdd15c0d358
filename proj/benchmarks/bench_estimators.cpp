#include <benchmark/benchmark.h>

#include "dgsmlab/estimators.hpp"
#include "dgsmlab/models.hpp"
#include "dgsmlab/pipeline.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

namespace {

DesignOutputs flood_outputs(std::size_t n) {
  const auto space = flood_input_space();
  const auto design = pick_freeze(generate_unit(Generator::MonteCarlo, n, 8, 1),
                                  generate_unit(Generator::MonteCarlo, n, 8, 2), space);
  return evaluate_design(*flood_overflow(), design);
}

}  // namespace

static void BM_EstimateSobol(benchmark::State& state) {
  const auto y = flood_outputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sobol(y.ya, y.yb, y.yab));
}
BENCHMARK(BM_EstimateSobol)->Arg(10000)->Arg(100000);

static void BM_DgsmNuTau(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = generate_unit(Generator::SobolSequence, n, 20, 1);
  const auto x = transform(u, morris_input_space());
  const auto g = gradients(*morris_function(), x, GradientMethod::analytic());
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgsm_nu(g));
    benchmark::DoNotOptimize(dgsm_tau(g, u.points));
  }
}
BENCHMARK(BM_DgsmNuTau)->Arg(10000);

static void BM_AnalysisFloodDesk(benchmark::State& state) {
  AnalysisPlan plan;
  plan.model = flood_overflow();
  plan.space = flood_input_space();
  plan.n_sobol = 10000;
  plan.n_dgsm = 10000;
  plan.replicates = 4;
  plan.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_analysis(plan));
}
BENCHMARK(BM_AnalysisFloodDesk)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
