#include <benchmark/benchmark.h>

#include "dpcm/efficiency.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/pcm.hpp"
#include "dpcm/spectral.hpp"
#include "dpcm/verification.hpp"

using namespace dpcm;

namespace {

PerturbationStructure case2b(std::size_t n) {
  Rng rng(11);
  return double_structure(PerturbationTag::DoublePerturbedCase2B, random_base(rng, n), 3.0, 0.4);
}

void BM_PowerIteration(benchmark::State& state) {
  const Pcm m = apply_perturbation(case2b(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(power_iteration(m));
}
BENCHMARK(BM_PowerIteration)->Arg(5)->Arg(9)->Arg(20)->Arg(50);

void BM_ClosedFormEigenvector(benchmark::State& state) {
  const PerturbationStructure s = case2b(static_cast<std::size_t>(state.range(0)));
  const ClosedFormVariant v = default_variant(s);
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_eigenvector(s, v));
}
BENCHMARK(BM_ClosedFormEigenvector)->Arg(5)->Arg(9)->Arg(20)->Arg(50);

void BM_Classify(benchmark::State& state) {
  const Pcm m = apply_perturbation_original(case2b(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(classify_perturbation(m));
}
BENCHMARK(BM_Classify)->Arg(5)->Arg(9)->Arg(15);

void BM_IsEfficient(benchmark::State& state) {
  const Pcm m = parametric_apq(static_cast<std::size_t>(state.range(0)), 2.0, 3.0);
  const SpectralResult r = power_iteration(m);
  for (auto _ : state) benchmark::DoNotOptimize(is_efficient(m, r.w));
}
BENCHMARK(BM_IsEfficient)->Arg(5)->Arg(9)->Arg(30);

void BM_LemmaSuite(benchmark::State& state) {
  LemmaGrid grid;
  grid.bases_per_point = 1;
  grid.case2a_bases_per_point = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_lemma_suite(grid, 42));
}
BENCHMARK(BM_LemmaSuite)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
