#include <benchmark/benchmark.h>

#include "nfforge/normalform.hpp"

using namespace nfforge;

namespace {

CanonicalStructure structure_of(std::vector<long long> m) {
  SpectrumClass cls;
  cls.kind = SpectrumCase::StrongHyperbolic;
  cls.m = std::move(m);
  cls.lambda = 1.0;
  return canonical_structure(cls);
}

VectorFieldJet build_instance(const CanonicalStructure& cs, int order) {
  int n = cs.n;
  VectorFieldJet x1 =
      VectorFieldJet::from_linear(to_scalar_matrix(integer_canonical_matrix(cs)), order);
  auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), order);
  TruncatedSeries f0 = TruncatedSeries::constant(n, order, Scalar(1));
  for (const auto& q : gens.real_forms) f0 += Scalar(Rat(1, 2)) * q;
  std::vector<TruncatedSeries> comps;
  for (int i = 0; i < n; ++i) {
    TruncatedSeries c = TruncatedSeries::variable(n, order, i);
    c.add_term(Exponent::unit(n, (i + 1) % n) + Exponent::unit(n, i), Scalar(Rat(1, 3)));
    comps.push_back(std::move(c));
  }
  return pushforward(f0 * x1, PolyMap(std::move(comps)));
}

}  // namespace

static void BM_geometric_normalize(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int order = static_cast<int>(state.range(1));
  CanonicalStructure cs =
      n == 2 ? structure_of({1, -1}) : (n == 3 ? structure_of({1, 1, -2}) : structure_of({1, -1, 2, -2}));
  VectorFieldJet input = build_instance(cs, order);
  for (auto _ : state) {
    auto nf = geometric_normalize(input, cs);
    benchmark::DoNotOptimize(nf);
  }
}
BENCHMARK(BM_geometric_normalize)->Args({2, 6})->Args({3, 6})->Args({4, 6})->Unit(benchmark::kMillisecond);

static void BM_pushforward(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int order = static_cast<int>(state.range(1));
  CanonicalStructure cs = n == 2 ? structure_of({1, -1}) : structure_of({1, -1, 2, -2});
  VectorFieldJet input = build_instance(cs, order);
  PolyMap phi = PolyMap::identity(n, order);
  std::vector<TruncatedSeries> comps = phi.components();
  comps[0].add_term(Exponent::unit(n, (n > 1 ? 1 : 0)) + Exponent::unit(n, 0), Scalar(Rat(1, 2)));
  PolyMap change{comps};
  for (auto _ : state) benchmark::DoNotOptimize(pushforward(input, change));
}
BENCHMARK(BM_pushforward)->Args({2, 8})->Args({4, 6})->Unit(benchmark::kMillisecond);
