#include <benchmark/benchmark.h>

#include "gwf/chains.hpp"
#include "gwf/duality.hpp"
#include "gwf/equilibrium.hpp"
#include "gwf/exact_ctmc.hpp"

namespace {

gwf::RateMatrix frequency_matrix(int n, double mu) {
  const gwf::ModelParams params{mu, n};
  return gwf::build_rate_matrix(gwf::frequency_spec(params), gwf::enumerate_spectra(n));
}

void BM_FrequencyRateMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(frequency_matrix(n, 1.0));
  }
}
BENCHMARK(BM_FrequencyRateMatrix)->DenseRange(6, 18, 4);

void BM_StationarySolve(benchmark::State& state) {
  const gwf::RateMatrix q = frequency_matrix(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gwf::stationary_distribution(q));
  }
  state.counters["states"] = static_cast<double>(q.size());
}
BENCHMARK(BM_StationarySolve)->DenseRange(6, 18, 4);

void BM_TransitionSemigroup(benchmark::State& state) {
  const gwf::RateMatrix q = gwf::forward_rates(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gwf::transition_semigroup(q, 1.0));
  }
}
BENCHMARK(BM_TransitionSemigroup)->DenseRange(2, 4);

}  // namespace
