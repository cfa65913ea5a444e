#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "copro/stats.hpp"

namespace {

using namespace copro::stats;

std::vector<double> sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(rng() % 50) / 49.0;  // heavy ties, like propensities
  return v;
}

void BM_Ranks(benchmark::State& state) {
  const auto v = sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ranks_with_ties(v));
}
BENCHMARK(BM_Ranks)->Range(64, 1 << 16);

void BM_KruskalWallis(benchmark::State& state) {
  std::vector<std::vector<double>> groups;
  for (std::uint64_t g = 0; g < 11; ++g) groups.push_back(sample(static_cast<std::size_t>(state.range(0)), g));
  for (auto _ : state) benchmark::DoNotOptimize(kruskal_wallis(groups));
}
BENCHMARK(BM_KruskalWallis)->Arg(300)->Arg(3000);

void BM_MannWhitneyExact(benchmark::State& state) {
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back(2 * i);
    b.push_back(2 * i + 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(a, b, MwuMethod::Exact));
}
BENCHMARK(BM_MannWhitneyExact);

void BM_Spearman(benchmark::State& state) {
  const auto x = sample(static_cast<std::size_t>(state.range(0)), 3);
  const auto y = sample(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(x, y));
}
BENCHMARK(BM_Spearman)->Arg(3000);

void BM_Kernels(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 0.001;
    benchmark::DoNotOptimize(chi_square_sf(x, 10.0));
    benchmark::DoNotOptimize(t_sf(x, 25.0));
    benchmark::DoNotOptimize(normal_sf(x));
    if (x > 40.0) x = 0.0;
  }
}
BENCHMARK(BM_Kernels);

}  // namespace

BENCHMARK_MAIN();
