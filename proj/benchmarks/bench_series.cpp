#include <benchmark/benchmark.h>

#include <random>

#include "nfforge/invariants.hpp"
#include "nfforge/vector_field.hpp"

using namespace nfforge;

namespace {

TruncatedSeries random_series(std::mt19937_64& rng, int n, int order) {
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  TruncatedSeries s(n, order);
  for_each_exponent_up_to(n, order, [&](const Exponent& a) {
    if (keep(rng) < 0.5) s.add_term(a, Scalar(Rat(num(rng), den(rng))));
  });
  return s;
}

}  // namespace

static void BM_series_mul(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int order = static_cast<int>(state.range(1));
  std::mt19937_64 rng(1);
  TruncatedSeries a = random_series(rng, n, order);
  TruncatedSeries b = random_series(rng, n, order);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_series_mul)->Args({2, 8})->Args({3, 6})->Args({4, 6});

static void BM_series_compose(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int order = static_cast<int>(state.range(1));
  std::mt19937_64 rng(2);
  TruncatedSeries f = random_series(rng, n, order);
  std::vector<TruncatedSeries> args;
  for (int i = 0; i < n; ++i) {
    TruncatedSeries g = random_series(rng, n, order);
    g.set_coeff(Exponent(n), Scalar());
    args.push_back(TruncatedSeries::variable(n, order, i) + g.drop_below(2));
  }
  for (auto _ : state) benchmark::DoNotOptimize(f.compose(args));
}
BENCHMARK(BM_series_compose)->Args({2, 8})->Args({3, 6})->Args({4, 6});

static void BM_hilbert_basis(benchmark::State& state) {
  std::vector<long long> m{3, -2, 1, -3};
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_basis({m}));
}
BENCHMARK(BM_hilbert_basis);

BENCHMARK_MAIN();
