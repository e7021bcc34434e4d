#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lswe/surface.hpp"
#include "oracles.hpp"

using lswe::PotentialSurface;
using lswe::SurfaceGauge;

TEST_CASE("bowl gauge fixture") {
  PotentialSurface s = PotentialSurface::from_source("q1^2/2+q2^2", 2);
  SurfaceGauge g = s.gauge(std::vector<double>{1.0, 1.0});
  CHECK(g.value == doctest::Approx(1.5));
  CHECK(g.G == doctest::Approx(5.0));
  CHECK(g.trace_H == doctest::Approx(3.0));
  CHECK(g.script_H[0] == doctest::Approx(1.0));
  CHECK(g.script_H[1] == doctest::Approx(4.0));
  CHECK(g.dG[0] == doctest::Approx(2.0));
  CHECK(g.dG[1] == doctest::Approx(8.0));
  CHECK(g.sum_dscript_H_diag() == doctest::Approx(5.0));
  CHECK(g.sum_script_H_sq() == doctest::Approx(17.0));
  CHECK(g.dimension() == 2);
}

TEST_CASE("linear surface has flat gauge") {
  PotentialSurface s = PotentialSurface::from_source("q1+2*q2", 2);
  SurfaceGauge g = s.gauge(std::vector<double>{0.3, -0.7});
  CHECK(g.G == doctest::Approx(5.0));
  CHECK(g.trace_H == doctest::Approx(0.0).scale(1.0));
  CHECK(g.script_H[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(g.script_H[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("script H is half the gradient of G") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    int dim = 1 + static_cast<int>(rng() % 3);
    PotentialSurface s = PotentialSurface::from_source(testutil::random_poly_source(rng, dim), dim);
    std::vector<double> p = testutil::nonstationary_point(s, rng, -1.2, 1.2);
    SurfaceGauge g = s.gauge(p);
    testutil::ScalarFn Gfn = [&](const std::vector<double>& q) { return s.gauge(q, 1).G; };
    for (int k = 0; k < dim; ++k) {
      double dGk = testutil::fd_partial(Gfn, p, k, 1e-4);
      CHECK(g.script_H[static_cast<std::size_t>(k)] ==
            doctest::Approx(0.5 * dGk).epsilon(1e-6).scale(1.0));
      CHECK(g.dG[static_cast<std::size_t>(k)] ==
            doctest::Approx(2.0 * g.script_H[static_cast<std::size_t>(k)]));
    }
  }
}

TEST_CASE("derivative of script H is symmetric and matches finite differences") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 4; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 2);
    PotentialSurface s = PotentialSurface::from_source(testutil::random_poly_source(rng, dim), dim);
    std::vector<double> p = testutil::nonstationary_point(s, rng, -1.2, 1.2);
    SurfaceGauge g = s.gauge(p);
    for (int i = 0; i < dim; ++i) {
      for (int l = 0; l < dim; ++l) {
        CHECK(g.dscript_H(i, l) == doctest::Approx(g.dscript_H(l, i)).epsilon(1e-12));
        testutil::ScalarFn Hi = [&, i](const std::vector<double>& q) {
          return s.gauge(q, 2).script_H[static_cast<std::size_t>(i)];
        };
        CHECK(g.dscript_H(i, l) ==
              doctest::Approx(testutil::fd_partial(Hi, p, l, 1e-4)).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("stationary points are rejected with context") {
  PotentialSurface s = PotentialSurface::from_source("q1^2", 1);
  try {
    s.gauge(std::vector<double>{0.0});
    FAIL("expected StationaryPointError");
  } catch (const lswe::StationaryPointError& e) {
    REQUIRE(e.point().size() == 1);
    CHECK(e.point()[0] == doctest::Approx(0.0));
    CHECK(e.G() == doctest::Approx(0.0));
  }
  // value() carries no guard
  CHECK(s.value(std::vector<double>{0.0}) == doctest::Approx(0.0));
  // the threshold is configurable
  PotentialSurface loose(lswe::PotentialExpr::parse("q1^2", 1), 1e-30);
  CHECK_NOTHROW(loose.gauge(std::vector<double>{1e-11}));
  CHECK_THROWS_AS(s.gauge(std::vector<double>{1e-11}), lswe::StationaryPointError);
}

TEST_CASE("first-order coefficient vectors") {
  PotentialSurface s = PotentialSurface::from_source("q1^2/2+q2^2", 2);
  SurfaceGauge g = s.gauge(std::vector<double>{1.0, 1.0});
  lswe::FirstOrderCoefficients fo = lswe::first_order_coefficients(g);
  REQUIRE(fo.upper.size() == 3);
  REQUIRE(fo.lower.size() == 3);
  CHECK(fo.upper[0] == doctest::Approx(0.2));   // script_H1 / G
  CHECK(fo.upper[1] == doctest::Approx(0.8));   // script_H2 / G
  CHECK(fo.upper[2] == doctest::Approx(3.0));   // TrH
  CHECK(fo.lower[0] == doctest::Approx(0.2));
  CHECK(fo.lower[1] == doctest::Approx(0.8));
  CHECK(fo.lower[2] == doctest::Approx(-0.6));  // -TrH / G
}

TEST_CASE("gauge of transcendental surfaces") {
  PotentialSurface s = PotentialSurface::from_source("exp(q1)+sin(q2)", 2);
  double x = 0.4, y = 1.1;
  SurfaceGauge g = s.gauge(std::vector<double>{x, y});
  double ex = std::exp(x), cy = std::cos(y), sy = std::sin(y);
  CHECK(g.G == doctest::Approx(ex * ex + cy * cy).epsilon(1e-14));
  CHECK(g.trace_H == doctest::Approx(ex - sy).epsilon(1e-14));
  CHECK(g.script_H[0] == doctest::Approx(ex * ex).epsilon(1e-14));
  CHECK(g.script_H[1] == doctest::Approx(-cy * sy).epsilon(1e-14));
}

TEST_CASE("dimension mismatches are validation errors") {
  PotentialSurface s = PotentialSurface::from_source("q1+q2", 2);
  CHECK_THROWS_AS(s.gauge(std::vector<double>{1.0}), lswe::ValidationError);
}
