#include <doctest.h>

#include "nfforge/linalg.hpp"
#include "nfforge/polynomial.hpp"

using namespace nfforge;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("rref, rank, inverse, solve") {
  RatMat a(3, 3);
  a(0, 0) = Rat(2); a(0, 1) = Rat(1); a(0, 2) = Rat(1);
  a(1, 0) = Rat(1); a(1, 1) = Rat(3); a(1, 2) = Rat(2);
  a(2, 0) = Rat(1); a(2, 1) = Rat(0); a(2, 2) = Rat(0);
  CHECK(a.rank() == 3);
  auto inv = a.inverse();
  REQUIRE(inv.has_value());
  CHECK(*inv * a == RatMat::identity(3));

  std::vector<Rat> b{Rat(1), Rat(2), Rat(3)};
  auto x = a.solve(b);
  REQUIRE(x.has_value());
  auto back = a.apply(*x);
  CHECK(back == b);
}

TEST_CASE("inconsistent systems and nullspace") {
  RatMat a(2, 2);
  a(0, 0) = Rat(1); a(0, 1) = Rat(1);
  a(1, 0) = Rat(2); a(1, 1) = Rat(2);
  CHECK(!a.solve({Rat(0), Rat(1)}).has_value());
  auto ns = a.nullspace();
  REQUIRE(ns.size() == 1);
  CHECK(a.apply(ns.front()) == std::vector<Rat>{Rat(0), Rat(0)});
}

TEST_CASE("determinant") {
  RatMat a(2, 2);
  a(0, 0) = Rat(1); a(0, 1) = Rat(2);
  a(1, 0) = Rat(3); a(1, 1) = Rat(4);
  CHECK(a.det() == Rat(-2));
  CHECK(RatMat(2, 2).det() == Rat(0));
}

TEST_CASE("polynomial arithmetic and gcd") {
  RatPoly p({Rat(-1), Rat(0), Rat(1)});  // t^2 - 1
  RatPoly q({Rat(1), Rat(1)});           // t + 1
  auto [quot, rem] = p.divmod(q);
  CHECK(rem.is_zero());
  CHECK(quot == RatPoly({Rat(-1), Rat(1)}));
  CHECK(poly_gcd(p, q) == q.monic());
}

TEST_CASE("squarefree decomposition") {
  // t (t-1)^2
  RatPoly p = RatPoly({Rat(0), Rat(1)}) * RatPoly({Rat(-1), Rat(1)}) * RatPoly({Rat(-1), Rat(1)});
  auto factors = squarefree_decomposition(p);
  REQUIRE(factors.size() == 2);
  CHECK(factors[0].first == RatPoly({Rat(0), Rat(1)}));
  CHECK(factors[0].second == 1);
  CHECK(factors[1].first == RatPoly({Rat(-1), Rat(1)}));
  CHECK(factors[1].second == 2);
}

TEST_CASE("characteristic and minimal polynomials") {
  RatMat a(2, 2);
  a(0, 0) = Rat(1);
  a(1, 1) = Rat(-1);
  CHECK(characteristic_polynomial(a) == RatPoly({Rat(-1), Rat(0), Rat(1)}));
  CHECK(minimal_polynomial(a) == RatPoly({Rat(-1), Rat(0), Rat(1)}));

  RatMat id = RatMat::identity(3);
  CHECK(minimal_polynomial(id) == RatPoly({Rat(-1), Rat(1)}));

  // companion matrix of t^3 - t
  RatMat c(3, 3);
  c(1, 0) = Rat(1);
  c(2, 1) = Rat(1);
  c(1, 2) = Rat(1);
  CHECK(characteristic_polynomial(c) == RatPoly({Rat(0), Rat(-1), Rat(0), Rat(1)}));
}

TEST_CASE("squarefree roots") {
  // t^2 + 4 -> +-2i
  auto roots = squarefree_roots(RatPoly({Rat(4), Rat(0), Rat(1)}));
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - std::complex<double>(0, 2)) < 1e-12);
  CHECK(std::abs(roots[1] - std::complex<double>(0, -2)) < 1e-12);

  // (t-1)(t-2)(t-3)
  RatPoly p = RatPoly({Rat(-1), Rat(1)}) * RatPoly({Rat(-2), Rat(1)}) * RatPoly({Rat(-3), Rat(1)});
  auto r3 = squarefree_roots(p);
  REQUIRE(r3.size() == 3);
  CHECK(std::abs(r3[0].real() - 3.0) < 1e-12);
  CHECK(std::abs(r3[1].real() - 2.0) < 1e-12);
  CHECK(std::abs(r3[2].real() - 1.0) < 1e-12);
}

TEST_CASE("rational parsing and kth roots") {
  CHECK(parse_rational("2/6") == Rat(1, 3));
  CHECK(parse_rational("-4") == Rat(-4));
  CHECK_THROWS_AS(parse_rational("1/0"), error);
  CHECK_THROWS_AS(parse_rational("a/b"), error);
  CHECK(rational_kth_root(Rat(4, 9), 2) == Rat(2, 3));
  CHECK(rational_kth_root(Rat(-8), 3) == Rat(-2));
  CHECK(!rational_kth_root(Rat(2), 2).has_value());
  CHECK(!rational_kth_root(Rat(-4), 2).has_value());
}

TEST_SUITE_END();
