#include <doctest.h>

#include "nfforge/integrability.hpp"
#include "test_util.hpp"

using namespace nfforge;
using testutil::one;
using testutil::var;

TEST_SUITE_BEGIN("integrability");

TEST_CASE("check_integrability") {
  int N = 6;
  auto x = var(2, N, 0), y = var(2, N, 1);
  VectorFieldJet saddle({x, -y});
  std::vector<TruncatedSeries> good{x * y};
  CHECK(check_integrability(saddle, good).ok);

  VectorFieldJet perturbed({x + y * y, -y});
  auto bad = check_integrability(perturbed, good);
  CHECK(!bad.ok);
  CHECK(bad.first_violation_degree == 3);  // X(xy) = y^3

  VectorFieldJet factored = (one(2, N) + x * y) * saddle;
  CHECK(check_integrability(factored, good).ok);
}

TEST_CASE("adapt_integrals") {
  int N = 6;
  // already adapted
  {
    auto x = var(2, N, 0), y = var(2, N, 1);
    std::vector<TruncatedSeries> fs{x * y};
    auto adapted = adapt_integrals(fs, N);
    CHECK(adapted == fs);
  }
  // (x1, x1 + x2 x3): dependent lowest parts, one elimination step
  {
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    std::vector<TruncatedSeries> fs{x1, x1 + x2 * x3};
    auto adapted = adapt_integrals(fs, N);
    REQUIRE(adapted.size() == 2);
    CHECK(adapted[0] == x1);
    CHECK(adapted[1] == x2 * x3);
    // lowest parts now have a nonzero wedge
    std::vector<TruncatedSeries> lowest{adapted[0].homogeneous_part(1),
                                        adapted[1].homogeneous_part(2)};
    CHECK(jacobian_rank_series(lowest).rank == 2);
  }
  // constants are stripped first
  {
    auto x = var(2, N, 0), y = var(2, N, 1);
    std::vector<TruncatedSeries> fs{one(2, N) + x * y};
    auto adapted = adapt_integrals(fs, N);
    CHECK(adapted[0] == x * y);
  }
  // outputs stay polynomial in the inputs with the rank preserved
  {
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    std::vector<TruncatedSeries> fs{x1 + x2 * x3, x1};
    auto adapted = adapt_integrals(fs, N);
    CHECK(jacobian_rank_series(adapted).rank == 2);
  }
}

TEST_CASE("adapt_integrals reports dependent inputs") {
  int N = 4;
  auto x = var(2, N, 0), y = var(2, N, 1);
  auto u = x * y;
  std::vector<TruncatedSeries> fs{u, u * u};  // functionally dependent
  CHECK_THROWS_AS(adapt_integrals(fs, N), error);
}

TEST_CASE("check_nondegeneracy on the named cases") {
  int N = 6;
  // 2D: X = (1+xy)(x dx - y dy), F = xy
  {
    auto x = var(2, N, 0), y = var(2, N, 1);
    VectorFieldJet saddle({x, -y});
    IntegrableSystem sys{(one(2, N) + x * y) * saddle, {x * y}, N, std::nullopt};
    auto rep = check_nondegeneracy(sys);
    CHECK(rep.cond_i);
    CHECK(rep.cond_ii);
    CHECK(rep.cond_iii);
    CHECK(rep.linear_semisimple);
    REQUIRE(rep.cls.has_value());
    CHECK(rep.cls->kind == SpectrumCase::StrongHyperbolic);
  }
  // 3D weak: X = x2 d2 - x3 d3, Fs = (x1, x2 x3)
  {
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    VectorFieldJet f({TruncatedSeries(3, N), x2, -x3});
    IntegrableSystem sys{f, {x1, x2 * x3}, N, std::nullopt};
    auto rep = check_nondegeneracy(sys);
    CHECK(rep.cond_i);
    CHECK(rep.cond_iii);
    CHECK(rep.zero_block_rank == 1);
    CHECK(rep.integral_order == std::vector<int>{0, 1});
  }
  // same X with Fs = (x1^2, x2 x3): dF1(O) = 0, condition iii fails
  {
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    VectorFieldJet f({TruncatedSeries(3, N), x2, -x3});
    IntegrableSystem sys{f, {x1 * x1, x2 * x3}, N, std::nullopt};
    auto rep = check_nondegeneracy(sys);
    CHECK(!rep.cond_iii);
  }
  // reordering: integrals given as (x2 x3, x1) still pass with the subset search
  {
    auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
    VectorFieldJet f({TruncatedSeries(3, N), x2, -x3});
    IntegrableSystem sys{f, {x2 * x3, x1}, N, std::nullopt};
    auto rep = check_nondegeneracy(sys);
    CHECK(rep.cond_iii);
    CHECK(rep.integral_order == std::vector<int>{1, 0});
  }
}

TEST_CASE("reduce_zero_block") {
  int N = 6;
  auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);

  // product system: O_c = 0
  {
    VectorFieldJet f({TruncatedSeries(3, N), x2, -x3});
    IntegrableSystem sys{f, {x1, x2 * x3}, N, std::nullopt};
    SpectrumClass cls{SpectrumCase::WeakHyperbolic, 1, {0, 1, -1}, 1.0};
    auto fam = reduce_zero_block(sys, cls);
    CHECK(fam.parameter_count == 1);
    CHECK(fam.reduced_dimension == 2);
    for (const auto& c : fam.center) CHECK(c.is_zero());
    auto y1 = var(2, N, 0), y2 = var(2, N, 1);
    CHECK(fam.reduced_at_zero == VectorFieldJet({y1, -y2}));
  }
  // parameter-dependent factor: X = (1+x1)(x2 d2 - x3 d3)
  {
    VectorFieldJet f({TruncatedSeries(3, N), x2 + x1 * x2, -x3 - x1 * x3});
    IntegrableSystem sys{f, {x1, x2 * x3}, N, std::nullopt};
    SpectrumClass cls{SpectrumCase::WeakHyperbolic, 1, {0, 1, -1}, 1.0};
    auto fam = reduce_zero_block(sys, cls);
    for (const auto& c : fam.center) CHECK(c.is_zero());
    auto y1 = var(2, N, 0), y2 = var(2, N, 1);
    CHECK(fam.reduced_at_zero == VectorFieldJet({y1, -y2}));
    // float family evaluation at c = 0.5: factor 1.5
    auto v = fam.evaluate(std::vector<double>{0.5}, std::vector<double>{0.1, 0.2});
    CHECK(v[0] == doctest::Approx(1.5 * 0.1));
    CHECK(v[1] == doctest::Approx(-1.5 * 0.2));
  }
  // shifted singular point: X = (x2 - x1^2) d2 - x3 d3 -> O_c at x2 = c^2
  {
    VectorFieldJet f({TruncatedSeries(3, N), x2 - x1 * x1, -x3});
    IntegrableSystem sys{f, {x1, (x2 - x1 * x1) * x3}, N, std::nullopt};
    SpectrumClass cls{SpectrumCase::WeakHyperbolic, 1, {0, 1, -1}, 1.0};
    auto fam = reduce_zero_block(sys, cls);
    auto c = var(1, N, 0);
    CHECK(fam.center[0] == c * c);
    CHECK(fam.center[1].is_zero());
    // verified by substitution inside the reduction; also check floats
    auto oc = fam.center_at(std::vector<double>{0.25});
    CHECK(oc[0] == doctest::Approx(0.0625));
  }
}

TEST_CASE("reduce_zero_block failure modes") {
  int N = 4;
  auto x1 = var(3, N, 0), x2 = var(3, N, 1), x3 = var(3, N, 2);
  VectorFieldJet f({TruncatedSeries(3, N), x2, -x3});
  SpectrumClass cls{SpectrumCase::WeakHyperbolic, 1, {0, 1, -1}, 1.0};
  // degenerate leading integral: x1^2 cannot straighten
  IntegrableSystem sys{f, {x1 * x1, x2 * x3}, N, std::nullopt};
  CHECK_THROWS_AS(reduce_zero_block(sys, cls), error);
}

TEST_CASE("singular_locus_2d") {
  int N = 6;
  auto x = var(2, N, 0), y = var(2, N, 1);

  // X = x dx: S1 = {x = 0}, S = S1
  {
    VectorFieldJet f({x, TruncatedSeries(2, N)});
    auto locus = singular_locus_2d(f);
    CHECK(locus.hyperbolic_axis == 0);
    CHECK(locus.curve.is_zero());
    CHECK(locus.field_vanishes_on_curve);
  }
  // X = (1+y) x dx
  {
    VectorFieldJet f({x + x * y, TruncatedSeries(2, N)});
    auto locus = singular_locus_2d(f);
    CHECK(locus.curve.is_zero());
    CHECK(locus.field_vanishes_on_curve);
  }
  // X = (x + y^3) dx: curve x(y) = -y^3
  {
    VectorFieldJet f({x + y * y * y, TruncatedSeries(2, N)});
    auto locus = singular_locus_2d(f);
    auto t = var(1, N, 0);
    CHECK(locus.curve == -(t * t * t));
    CHECK(locus.field_vanishes_on_curve);
  }
  // negative control: second component does not vanish on S1
  {
    VectorFieldJet f({x + x * y, y * y * y * y * y});
    auto locus = singular_locus_2d(f);
    CHECK(!locus.field_vanishes_on_curve);
    CHECK(!locus.other_component_on_curve.is_zero());
  }
}

TEST_CASE("singular_locus_2d error modes") {
  int N = 4;
  auto x = var(2, N, 0), y = var(2, N, 1);
  // both eigenvalues zero: implicit solve cannot start
  VectorFieldJet nil({x * y, TruncatedSeries(2, N)});
  CHECK_THROWS_AS(singular_locus_2d(nil), error);
  // strong hyperbolic: not the weak setting
  VectorFieldJet saddle({x, -y});
  CHECK_THROWS_AS(singular_locus_2d(saddle), error);
}

TEST_SUITE_END();
