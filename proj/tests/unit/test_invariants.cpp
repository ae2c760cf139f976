#include <doctest.h>

#include <set>

#include "nfforge/invariants.hpp"
#include "nfforge/vector_field.hpp"
#include "test_util.hpp"

using namespace nfforge;
using testutil::one;
using testutil::var;

namespace {

long long dot(const Exponent& a, const std::vector<long long>& m) {
  long long r = 0;
  for (int i = 0; i < a.nvars(); ++i) r += a[i] * m[static_cast<std::size_t>(i)];
  return r;
}

// Brute-force oracle: all nonzero solutions of <a, m> = 0 with |a| <= cap.
std::vector<Exponent> enumerate_solutions(const std::vector<long long>& m, int cap) {
  std::vector<Exponent> out;
  for_each_exponent_up_to(static_cast<int>(m.size()), cap, [&](const Exponent& a) {
    if (!a.is_zero() && dot(a, m) == 0) out.push_back(a);
  });
  return out;
}

// Greedy check that `a` is a Z+-combination of the generators.
bool generated_by(const Exponent& a, const std::vector<Exponent>& gens) {
  if (a.is_zero()) return true;
  for (const auto& g : gens) {
    if (!g.divides(a)) continue;
    if (generated_by(a - g, gens)) return true;
  }
  return false;
}

CanonicalStructure structure_of(SpectrumCase kind, std::vector<long long> m) {
  SpectrumClass cls;
  cls.kind = kind;
  cls.m = std::move(m);
  cls.lambda = 1.0;
  for (long long v : cls.m)
    if (v == 0) ++cls.zero_count;
  return canonical_structure(cls);
}

}  // namespace

TEST_SUITE_BEGIN("invariants");

TEST_CASE("hilbert_basis on the named cases") {
  auto hb = hilbert_basis({{1, -1}});
  REQUIRE(hb.generators.size() == 1);
  CHECK(hb.generators[0] == Exponent{1, 1});

  auto hb2 = hilbert_basis({{2, -3}});
  REQUIRE(hb2.generators.size() == 1);
  CHECK(hb2.generators[0] == Exponent{3, 2});

  auto hb3 = hilbert_basis({{1, 1, -2}});
  REQUIRE(hb3.generators.size() == 3);
  std::set<Exponent> got(hb3.generators.begin(), hb3.generators.end());
  CHECK(got.count(Exponent{2, 0, 1}));
  CHECK(got.count(Exponent{1, 1, 1}));
  CHECK(got.count(Exponent{0, 2, 1}));
}

TEST_CASE("hilbert_basis generates exactly the brute-force solution set") {
  // Small version of the acceptance sweep: entries in -2..2, n <= 3.
  for (int n = 1; n <= 3; ++n) {
    std::vector<long long> m(static_cast<std::size_t>(n), -2);
    while (true) {
      bool nonzero = false;
      for (long long v : m) nonzero |= v != 0;
      if (nonzero) {
        auto hb = hilbert_basis({m});
        auto solutions = enumerate_solutions(m, 8);
        for (const auto& s : solutions) CHECK(generated_by(s, hb.generators));
        for (const auto& g : hb.generators) {
          CHECK(dot(g, m) == 0);
          CHECK(!g.is_zero());
          // minimality: dropping g breaks generation of g itself
          std::vector<Exponent> rest;
          for (const auto& other : hb.generators)
            if (!(other == g)) rest.push_back(other);
          CHECK(!generated_by(g, rest));
        }
      }
      int pos = 0;
      while (pos < n && m[static_cast<std::size_t>(pos)] == 2) m[static_cast<std::size_t>(pos++)] = -2;
      if (pos == n) break;
      ++m[static_cast<std::size_t>(pos)];
    }
  }
}

TEST_CASE("hilbert_basis degree cap") {
  // m = (5, -7): the generator (7, 5) has degree 12 > 5.
  CHECK_THROWS_AS(hilbert_basis({{5, -7}}, 5), error);
  CHECK_NOTHROW(hilbert_basis({{5, -7}}, 24));
}

TEST_CASE("invariant_generators on the named cases") {
  int N = 6;
  // Strong hyperbolic m = (1, -1): {xy}
  {
    auto cs = structure_of(SpectrumCase::StrongHyperbolic, {1, -1});
    auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
    REQUIRE(gens.real_forms.size() == 1);
    CHECK(gens.real_forms[0] == var(2, N, 0) * var(2, N, 1));
  }
  // Strong elliptic, one rotation block: {x^2 + y^2}
  {
    auto cs = structure_of(SpectrumCase::StrongElliptic, {1, -1});
    auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
    REQUIRE(gens.real_forms.size() == 1);
    auto x = var(2, N, 0), y = var(2, N, 1);
    CHECK(gens.real_forms[0] == x * x + y * y);
  }
  // Weak hyperbolic m = (0, 1, -1): {x1, x2 x3}
  {
    auto cs = structure_of(SpectrumCase::WeakHyperbolic, {0, 1, -1});
    auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
    REQUIRE(gens.real_forms.size() == 2);
    CHECK(gens.real_forms[0] == var(3, N, 0));
    CHECK(gens.real_forms[1] == var(3, N, 1) * var(3, N, 2));
  }
}

TEST_CASE("every generator is annihilated by the canonical linear field") {
  int N = 6;
  std::vector<CanonicalStructure> cases{
      structure_of(SpectrumCase::StrongHyperbolic, {1, -1}),
      structure_of(SpectrumCase::StrongHyperbolic, {2, -3, 1}),
      structure_of(SpectrumCase::WeakHyperbolic, {0, 1, -1}),
      structure_of(SpectrumCase::StrongElliptic, {1, -1, 2, -2}),
      structure_of(SpectrumCase::WeakElliptic, {0, 1, -1}),
  };
  for (const auto& cs : cases) {
    auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
    VectorFieldJet x1 =
        VectorFieldJet::from_linear(to_scalar_matrix(integer_canonical_matrix(cs)), N);
    REQUIRE(!gens.real_forms.empty());
    for (const auto& q : gens.real_forms) {
      CHECK(q.has_real_coefficients());
      CHECK(lie_derivative(x1, q).is_zero());
    }
  }
}

TEST_CASE("mixed elliptic monomials contribute real and imaginary parts") {
  int N = 6;
  auto cs = structure_of(SpectrumCase::StrongElliptic, {1, -1, 2, -2});
  auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
  // q1 = x1^2+x2^2, q2 = x3^2+x4^2, and Re/Im of z1^2 zbar2.
  REQUIRE(gens.real_forms.size() == 4);
  auto x1 = var(4, N, 0), x2 = var(4, N, 1), x3 = var(4, N, 2), x4 = var(4, N, 3);
  TruncatedSeries re_mixed = (x1 * x1 - x2 * x2) * x3 + Scalar(2) * (x1 * x2 * x4);
  TruncatedSeries im_mixed = Scalar(2) * (x1 * x2 * x3) - (x1 * x1 - x2 * x2) * x4;
  bool found_re = false, found_im = false;
  for (const auto& q : gens.real_forms) {
    if (q == re_mixed) found_re = true;
    if (q == im_mixed || q == -im_mixed) found_im = true;
  }
  CHECK(found_re);
  CHECK(found_im);
}

TEST_CASE("express_in_invariants on the named cases") {
  int N = 6;
  auto cs = structure_of(SpectrumCase::StrongHyperbolic, {1, -1});
  auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
  auto x = var(2, N, 0), y = var(2, N, 1);
  auto u = x * y;

  TruncatedSeries f = one(2, N) + u + u * u;
  TruncatedSeries rep = express_in_invariants(f, gens);
  CHECK(rep.coeff(Exponent{0}) == Scalar(1));
  CHECK(rep.coeff(Exponent{1}) == Scalar(1));
  CHECK(rep.coeff(Exponent{2}) == Scalar(1));
  CHECK(rep.term_count() == 3);
  CHECK(rep.compose(gens.real_forms) == f);

  CHECK_THROWS_AS(express_in_invariants(x, gens), error);

  auto cs_rot = structure_of(SpectrumCase::StrongElliptic, {1, -1});
  auto gens_rot = invariant_generators(cs_rot, hilbert_basis({cs_rot.mhat}), N);
  auto q = x * x + y * y;
  TruncatedSeries f2 = q + q * q * q;
  TruncatedSeries rep2 = express_in_invariants(f2, gens_rot);
  CHECK(rep2.coeff(Exponent{1}) == Scalar(1));
  CHECK(rep2.coeff(Exponent{3}) == Scalar(1));
  CHECK(rep2.compose(gens_rot.real_forms) == f2);
}

TEST_CASE("express round-trips random invariant series") {
  testutil::Rng rng(41);
  int N = 6;
  auto cs = structure_of(SpectrumCase::StrongElliptic, {1, -1, 2, -2});
  auto gens = invariant_generators(cs, hilbert_basis({cs.mhat}), N);
  for (int trial = 0; trial < 8; ++trial) {
    // random polynomial in the generators, then re-expressed
    TruncatedSeries f(4, N);
    for (std::size_t g = 0; g < gens.real_forms.size(); ++g) {
      f += Scalar(rng.rat()) * gens.real_forms[g];
      f += Scalar(rng.rat()) * (gens.real_forms[g] * gens.real_forms[0]);
    }
    TruncatedSeries rep = express_in_invariants(f, gens);
    CHECK(rep.compose(gens.real_forms) == f);
  }
}

TEST_SUITE_END();
