#include "wavecount/euclid_count.hpp"
#include "wavecount/hyperbolic_count.hpp"

#include <benchmark/benchmark.h>

using namespace wavecount;

static void BM_CountExact(benchmark::State& state) {
  const auto Z2 = euclid::IntegerLattice::standard(2);
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(euclid::count_exact(Z2, R));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountExact)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_MollifiedCount(benchmark::State& state) {
  const auto Z2 = euclid::IntegerLattice::standard(2);
  const double R = static_cast<double>(state.range(0));
  const euclid::RadialMollifier m(2, euclid::optimal_epsilon(2, R));
  for (auto _ : state) benchmark::DoNotOptimize(euclid::mollified_count(Z2, R, m));
}
BENCHMARK(BM_MollifiedCount)->Arg(20)->Arg(80)->Arg(200);

// the Fourier cache is filled once outside the timed loop
static void BM_PoissonSpectral(benchmark::State& state) {
  const auto Z2 = euclid::IntegerLattice::standard(2);
  const euclid::RadialMollifier m(2, 0.5);
  euclid::poisson_spectral_count_auto(Z2, 3, m);
  for (auto _ : state) benchmark::DoNotOptimize(euclid::poisson_spectral_count_auto(Z2, 3, m).value);
}
BENCHMARK(BM_PoissonSpectral)->Unit(benchmark::kMillisecond);

static void BM_HyperbolicCount(benchmark::State& state) {
  const auto z = hyperbolic::UpperHalfPoint::make(0.1, 1.3);
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hyperbolic::count_in_ball(z, R).count);
}
BENCHMARK(BM_HyperbolicCount)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);
