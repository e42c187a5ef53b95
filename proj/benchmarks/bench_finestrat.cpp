#include <benchmark/benchmark.h>

#include "finestrat/bayes.hpp"
#include "finestrat/design.hpp"
#include "finestrat/estimators.hpp"
#include "finestrat/population.hpp"
#include "finestrat/rng.hpp"

using namespace finestrat;

namespace {

FinitePopulation gaussian(int strata) {
  GaussianPopConfig cfg;
  cfg.strata = strata;
  return gaussian_population(cfg);
}

DrawnSample sample_of(const FinitePopulation& pop, int n) {
  Rng rng(7);
  return draw_srswor(pop, SamplingPlan::uniform(DesignKind::srswor, n), rng);
}

void BM_DrawSrswor(benchmark::State& state) {
  const auto pop = gaussian(static_cast<int>(state.range(0)));
  const auto plan = SamplingPlan::uniform(DesignKind::srswor, 2);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw_srswor(pop, plan, rng));
}
BENCHMARK(BM_DrawSrswor)->Arg(50)->Arg(500);

void BM_DrawPpsSystematic(benchmark::State& state) {
  HmtPopConfig cfg;
  cfg.units = static_cast<int>(state.range(0));
  const auto pop = hmt_population(cfg);
  const auto plan = SamplingPlan::uniform(DesignKind::pps_systematic, 1);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw_pps_systematic(pop, plan, rng));
}
BENCHMARK(BM_DrawPpsSystematic)->Arg(2000)->Arg(20000);

void BM_KernelWeights(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(h);
  for (std::size_t i = 0; i < h; ++i) x[i] = static_cast<double>(i + 1) / static_cast<double>(h);
  const double b = default_bandwidth(h);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_weights(x, b));
}
BENCHMARK(BM_KernelWeights)->Arg(50)->Arg(200)->Arg(1000);

void BM_CollapsedVariance(benchmark::State& state) {
  const auto pop = gaussian(static_cast<int>(state.range(0)));
  const auto s = sample_of(pop, 1);
  const auto map = make_pseudo_strata(pop.indices());
  for (auto _ : state) benchmark::DoNotOptimize(collapsed_variance(s, map));
}
BENCHMARK(BM_CollapsedVariance)->Arg(50)->Arg(500);

void BM_McmcSweep(benchmark::State& state) {
  const auto pop = gaussian(static_cast<int>(state.range(0)));
  const auto s = sample_of(pop, static_cast<int>(state.range(1)));
  const auto data = ModelData::build(s, normalized_weights(s), make_basis(s.indices(), 2, 7));
  McmcConfig cfg;
  cfg.iterations = 200;
  cfg.burn_in = 50;
  Priors priors;
  for (auto _ : state) {
    auto draws = data.max_psu() > 1 ? run_mcmc_multi(data, priors, cfg) : run_mcmc_single(data, priors, cfg);
    benchmark::DoNotOptimize(draws);
  }
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_McmcSweep)->Args({50, 1})->Args({50, 2})->Args({200, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
