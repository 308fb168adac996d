#include <doctest.h>

#include "latgeo/lattice.hpp"
#include "test_support.hpp"

using namespace latgeo;
using latgeo::testing::max_diff;
using latgeo::testing::wrap;

namespace {

RealFunction vec(std::initializer_list<double> v) {
  RealFunction out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("shift on the periodic window") {
  CHECK(max_diff(shift(vec({1, 2, 3}), Dir::plus), vec({2, 3, 1})) == 0.0);
  CHECK(max_diff(shift(vec({1, 2, 3}), Dir::minus), vec({3, 1, 2})) == 0.0);
  CHECK(max_diff(shift(RealFunction::Constant(7, 2.5), Dir::plus), RealFunction::Constant(7, 2.5)) ==
        0.0);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexFunction f = latgeo::testing::random_complex(3 + trial, rng);
    CHECK(max_diff(shift(shift(f, Dir::plus), Dir::minus), f) == 0.0);
    CHECK(max_diff(shift(shift(f, Dir::minus), Dir::plus), f) == 0.0);
  }
}

TEST_CASE("finite differences") {
  CHECK(max_diff(finite_diff(vec({1, 2, 3}), Dir::plus), vec({1, 1, -2})) == 0.0);
  CHECK(finite_diff(RealFunction::Constant(5, 4.0), Dir::minus).abs().maxCoeff() == 0.0);

  std::mt19937_64 rng(2);
  const RealFunction f = latgeo::testing::random_real(11, rng);
  CHECK(max_diff(finite_diff(f, Dir::plus) + f, shift(f, Dir::plus)) < 1e-15);
}

TEST_CASE("laplacian") {
  CHECK(max_diff(laplacian(vec({1, 2, 3})), vec({3, 0, -3})) == 0.0);
  CHECK(laplacian(RealFunction::Constant(9, -1.0)).abs().maxCoeff() == 0.0);

  SUBCASE("affine zero modes vanish away from the seam") {
    const double alpha = 0.7, beta = -1.3;
    RealFunction y(20);
    for (Eigen::Index i = 0; i < 20; ++i) y(i) = i * alpha - (i - 1) * beta;
    const RealFunction lap = laplacian(y);
    CHECK(lap.segment(1, 18).abs().maxCoeff() < 1e-12);
    CHECK(std::abs(lap(0)) > 1.0);  // the seam is not a zero mode
  }

  SUBCASE("Δ = -(R₊-1)(R₋-1)") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexFunction f = latgeo::testing::random_complex(17, rng);
      const ComplexFunction rhs = -finite_diff(finite_diff(f, Dir::minus), Dir::plus);
      CHECK(max_diff(laplacian(f), rhs) < 1e-12);
    }
  }
}

TEST_CASE("integrate") {
  CHECK(integrate(RealFunction::Constant(5, 1.0), Measure::uniform(5)) == 5.0);
  CHECK_THROWS_AS(integrate(vec({1, 2}), Measure::uniform(3)), DimensionError);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 3 + trial;
    const ComplexFunction f = latgeo::testing::random_complex(n, rng);
    const double scale = f.abs().maxCoeff();
    CHECK(std::abs(integrate(finite_diff(f, Dir::plus), Measure::uniform(n))) <=
          1e-12 * n * scale);
    CHECK(std::abs(integrate(finite_diff(f, Dir::minus), Measure::uniform(n))) <=
          1e-12 * n * scale);
  }
}

TEST_CASE("summation by parts against an explicit loop") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 3 + trial % 40;
    const ComplexFunction f = latgeo::testing::random_complex(n, rng);
    const RealFunction mu = latgeo::testing::random_positive(n, rng);
    for (Dir dir : {Dir::plus, Dir::minus}) {
      const Complex lhs = integrate(finite_diff(f, dir), Measure(mu));
      // Σ_i (μ(i∓1) - μ(i)) f(i)
      const int step = dir == Dir::plus ? -1 : 1;
      Complex rhs = 0.0;
      double scale = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        rhs += (mu(wrap(i + step, n)) - mu(i)) * f(i);
        scale += mu(i) * std::abs(f(i));
      }
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("metric and measure validation") {
  CHECK_THROWS_AS(EdgeMetric(vec({1, 0, 2})), std::invalid_argument);
  CHECK_THROWS_AS(EdgeMetric(vec({1, -1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(EdgeMetric(vec({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(Measure(vec({1, 2, 0})), std::invalid_argument);
  CHECK_NOTHROW(EdgeMetric(vec({1, 2, 3})));
  try {
    EdgeMetric bad(vec({1, 2, 0, 4}));
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("[2]") != std::string::npos);
  }
}

TEST_CASE("ratio derivative") {
  SUBCASE("constant metric") {
    const RatioDerivative r = rho(EdgeMetric::constant(6, 2.0));
    CHECK(max_diff(r.plus, RealFunction::Ones(6)) == 0.0);
    CHECK(max_diff(r.minus, RealFunction::Ones(6)) == 0.0);
  }
  SUBCASE("geometric metric on an open window") {
    const double lambda = 1.7;
    const EdgeMetric g = EdgeMetric::geometric(12, 0.3, lambda);
    const RatioDerivative r = rho(g);
    const SiteRange in = interior_sites(12, Window::open);
    CHECK((r.plus.segment(in.first, in.count()) - lambda).abs().maxCoeff() < 1e-12);
    CHECK((r.minus.segment(in.first, in.count()) - 1.0 / lambda).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("g = [1,2,4,8]") {
    const RatioDerivative r = rho(EdgeMetric(vec({1, 2, 4, 8})));
    CHECK(r.plus(0) == 2.0);
    CHECK(r.plus(1) == 2.0);
    CHECK(r.plus(2) == 2.0);
    CHECK(r.minus(2) == 0.5);
  }
  SUBCASE("pointwise formula") {
    std::mt19937_64 rng(6);
    const RealFunction gv = latgeo::testing::random_positive(9, rng);
    const RatioDerivative r = rho(EdgeMetric(gv));
    for (Eigen::Index i = 0; i < 9; ++i) {
      CHECK(r.plus(i) == doctest::Approx(gv(wrap(i + 1, 9)) / gv(i)).epsilon(1e-14));
      CHECK(r.minus(i) == doctest::Approx(gv(wrap(i - 2, 9)) / gv(wrap(i - 1, 9))).epsilon(1e-14));
    }
  }
}

TEST_CASE("divergence compatibility") {
  CHECK(is_divergence_compatible(EdgeMetric::constant(8, 3.0), 1e-12));
  CHECK(is_divergence_compatible(EdgeMetric::geometric(10, 1.0, 2.0), 1e-12, Window::open));
  CHECK_FALSE(is_divergence_compatible(EdgeMetric::geometric(10, 1.0, 2.0), 1e-12));
  CHECK_FALSE(is_divergence_compatible(EdgeMetric(vec({1, 1, 2, 1})), 1e-12));
  CHECK_THROWS_AS(is_divergence_compatible(EdgeMetric::constant(4), 0.0), PreconditionError);

  const EdgeMetric g = EdgeMetric::geometric(15, 0.5, 1.3);
  CHECK(measure_ratio_defect(g, Measure::from_metric(g), Window::open) < 1e-12);
  CHECK(measure_ratio_defect(g, Measure::uniform(15), Window::open) > 0.1);
}

TEST_CASE("div_basis") {
  const auto [zp, zm] = div_basis(EdgeMetric::constant(5, 7.0));
  CHECK(zp.abs().maxCoeff() == 0.0);
  CHECK(zm.abs().maxCoeff() == 0.0);

  const auto [dp, dm] = div_basis(EdgeMetric(vec({1, 2, 4})));
  CHECK(max_diff(dp, vec({-3.0, 0.5, 0.5})) < 1e-15);
  CHECK(max_diff(dm, vec({0.75, -1.0, -1.0})) < 1e-15);

  const double lambda = 3.0;
  const auto [gp, gm] = div_basis(EdgeMetric::geometric(8, 1.0, lambda));
  CHECK((gp.segment(1, 7) - (1.0 - 1.0 / lambda)).abs().maxCoeff() < 1e-12);
  CHECK((gm.segment(1, 7) - (1.0 - lambda)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("exterior derivative and evaluation") {
  const OneForm<double> df = exterior_d(vec({1, 2, 3}));
  CHECK(max_diff(df.plus, vec({1, 1, -2})) == 0.0);
  CHECK(max_diff(df.minus, vec({2, -1, -1})) == 0.0);

  const OneForm<double> dc = exterior_d(RealFunction::Constant(4, 9.0));
  CHECK(dc.plus.abs().maxCoeff() == 0.0);

  std::mt19937_64 rng(7);
  const ComplexFunction f = latgeo::testing::random_complex(10, rng);
  const ComplexFunction h = latgeo::testing::random_complex(10, rng);
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  const auto lhs = exterior_d(ComplexFunction(a * f + b * h));
  const auto df1 = exterior_d(f);
  const auto dh1 = exterior_d(h);
  CHECK(max_diff(lhs.plus, a * df1.plus + b * dh1.plus) < 1e-13);
  CHECK(max_diff(lhs.minus, a * df1.minus + b * dh1.minus) < 1e-13);

  const VelocityField x(ComplexFunction::Ones(3), ComplexFunction::Zero(3));
  CHECK(max_diff(eval_field(df, x), vec({1, 1, -2}).cast<Complex>()) == 0.0);
  CHECK(eval_field(dc, VelocityField(ComplexFunction::Ones(4), ComplexFunction::Ones(4)))
            .abs()
            .maxCoeff() == 0.0);
  const OneForm<double> zero{RealFunction::Zero(3), RealFunction::Zero(3)};
  CHECK(eval_field(zero, x).abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(eval_field(df, VelocityField(ComplexFunction::Ones(4), ComplexFunction::Ones(4))),
                  DimensionError);
  CHECK_THROWS_AS(VelocityField(ComplexFunction::Ones(4), ComplexFunction::Ones(5)), DimensionError);
}
