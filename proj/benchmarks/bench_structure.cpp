#include "wavecount/arithmetic_lattice.hpp"
#include "wavecount/constant_term.hpp"
#include "wavecount/mostow_nilpotent.hpp"
#include "wavecount/spherical_structure.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace wavecount;

static void BM_SpectralProjection(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ct::CMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = ct::Complex(g(rng), 0);
  // shift so the spectrum splits cleanly at 0
  for (int i = 0; i < n; ++i) A(i, i) += (i % 2 == 0 ? -2.0 * n : 2.0 * n);
  for (auto _ : state) benchmark::DoNotOptimize(ct::spectral_projection(A, 0, 1).P);
}
BENCHMARK(BM_SpectralProjection)->Arg(2)->Arg(4)->Arg(8);

static void BM_ConstantTerm(benchmark::State& state) {
  ct::CVector seed(2);
  seed << 1, 0.5;
  const auto cs = ct::certified_rank_one(-5, 1, 2, 1.0, seed);
  for (auto _ : state) benchmark::DoNotOptimize(ct::constant_term(cs.system, cs.phi0).u);
}
BENCHMARK(BM_ConstantTerm)->Unit(benchmark::kMicrosecond);

static void BM_SymmetricFamilyCones(benchmark::State& state) {
  const auto family = spherical::symmetric_pair_family();
  for (auto _ : state)
    for (const auto& in : family) benchmark::DoNotOptimize(spherical::compression_cone(in.roots, in.flags).S);
}
BENCHMARK(BM_SymmetricFamilyCones)->Unit(benchmark::kMillisecond);

static void BM_Gamma0(benchmark::State& state) {
  const auto h = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(arithmetic::enumerate_gamma0(h).size());
}
BENCHMARK(BM_Gamma0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_MostowDecomposition(benchmark::State& state) {
  const auto u = mostow::filiform(static_cast<int>(state.range(0)));
  RatVec e0(u.dim, Rational(0));
  e0[0] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mostow::exp_decomposition_check(u, {e0}, 20, 7).recovered);
}
BENCHMARK(BM_MostowDecomposition)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
