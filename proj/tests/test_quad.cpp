#include <doctest.h>

#include <cmath>

#include "haar/profiles.hpp"
#include "haar/quad.hpp"

using namespace haar;

namespace {
const std::vector<double> kNoBreaks;
}

TEST_CASE("integrate_1d on elementary integrands") {
  CHECK(integrate_1d([](double) { return 1.0; }, 0, 1, kNoBreaks) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate_1d([](double x) { return x; }, 0, 1, kNoBreaks) == doctest::Approx(0.5).epsilon(1e-14));

  // triangle profile: area must match the closed form of int (1-|x|) dx
  const std::vector<double> breaks{-1.0, 0.0, 1.0};
  const double area = integrate_1d([](double x) { return beta(x); }, -1, 1, breaks);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate_1d input checking") {
  CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 1, 0, kNoBreaks),
                  std::invalid_argument);
  QuadConfig bad;
  bad.gl_order = 1;
  CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 0, 1, kNoBreaks, bad),
                  std::invalid_argument);
}

TEST_CASE("integrate_1d reports non-convergence with its best estimate") {
  QuadConfig cfg;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-15;
  cfg.max_subdiv = 2;
  const double jump = 0.6180339887498949;
  auto f = [&](double x) { return x > jump ? 1.0 : 0.0; };
  try {
    (void)integrate_1d(f, 0, 1, kNoBreaks, cfg);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(std::abs(e.best_estimate().real() - (1.0 - jump)) < 1e-2);
    CHECK(e.achieved_error() > e.requested_tolerance());
  }
}

TEST_CASE("integrate_polygon on constants and areas") {
  auto one = [](double, double) { return Complex{1.0, 0.0}; };
  const Complex sq = integrate_polygon(one, Polygon::box({0, 0}, {1, 1}), 0.5);
  CHECK(std::abs(sq - Complex{1.0, 0.0}) < 1e-13);
  const Complex tr = integrate_polygon(one, Polygon::triangle({0, 0}, {1, 0}, {0, 1}), 0.5);
  CHECK(std::abs(tr - Complex{0.5, 0.0}) < 1e-13);
}

TEST_CASE("integrate_polygon separates the alpha product") {
  // int alpha = 0 certified by exact trapezoid areas of the closed form
  const auto& fn = alpha_fn();
  double trapezoid = 0.0;
  for (std::size_t i = 0; i + 1 < fn.breakpoints().size(); ++i) {
    trapezoid += 0.5 * (fn.node_values()[i] + fn.node_values()[i + 1]) *
                 (fn.breakpoints()[i + 1] - fn.breakpoints()[i]);
  }
  CHECK(trapezoid == doctest::Approx(0.0).epsilon(1e-15));

  auto f = [](double x, double y) { return Complex{alpha(x) * alpha(y), 0.0}; };
  const Complex v = integrate_polygon(f, Polygon::box({-1, -1}, {1, 1}), 0.5);
  CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("integrate_polygon rejects degenerate regions") {
  const Polygon sliver({{0, 0}, {1, 1}, {2, 2}});
  CHECK(sliver.area() == doctest::Approx(0.0));
  CHECK_THROWS_AS(integrate_polygon([](double, double) { return Complex{1, 0}; }, sliver, 0.5),
                  DegenerateRegion);
}

TEST_CASE("tensor rule is exact for high-degree polynomials on clean cells") {
  QuadConfig cfg;
  cfg.gl_order = 5;  // exact through degree 9 per axis
  auto f = [](double x, double y) { return Complex{std::pow(x, 9) * std::pow(y, 8), 0.0}; };
  const Complex v = integrate_polygon(f, Polygon::box({0, 0}, {1, 1}), 1.0, cfg);
  CHECK(std::abs(v - Complex{1.0 / 90.0, 0.0}) < 1e-15);
}

TEST_CASE("polygon integrals are additive over partitions") {
  QuadConfig cfg;
  auto f = [](double x, double y) {
    return Complex{std::cos(3 * x + y), std::sin(x - 2 * y)};
  };
  const Complex whole = integrate_polygon(f, Polygon::box({0, 0}, {2, 1}), 0.5, cfg);
  const Complex left = integrate_polygon(f, Polygon::box({0, 0}, {1, 1}), 0.5, cfg);
  const Complex right = integrate_polygon(f, Polygon::box({1, 0}, {2, 1}), 0.5, cfg);
  CHECK(std::abs(whole - left - right) < 10 * cfg.abs_tol);

  // a non-convex partition piece
  const Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  const Complex a = integrate_polygon(f, ell, 0.5, cfg);
  const Complex b = integrate_polygon(f, Polygon::box({1, 1}, {2, 2}), 0.5, cfg);
  const Complex full = integrate_polygon(f, Polygon::box({0, 0}, {2, 2}), 0.5, cfg);
  CHECK(std::abs(full - a - b) < 10 * cfg.abs_tol);
}

TEST_CASE("mc_integrate basics") {
  McConfig cfg;
  cfg.samples = 1000;
  cfg.seed = 42;
  const Polygon unit = Polygon::box({0, 0}, {1, 1});

  auto one = [](double, double) { return Complex{1.0, 0.0}; };
  const McEstimate c = mc_integrate(one, unit, cfg);
  CHECK(c.value.real() == doctest::Approx(1.0));
  CHECK(c.std_error == doctest::Approx(0.0));

  McConfig big;
  big.samples = 1'000'000;
  big.seed = 7;
  const McEstimate x = mc_integrate([](double u, double) { return Complex{u, 0.0}; }, unit, big);
  CHECK(std::abs(x.value.real() - 0.5) < 3.0 * x.std_error);

  const McEstimate bb = mc_integrate(
      [](double u, double v) { return Complex{beta(u) * beta(v), 0.0}; },
      Polygon::box({-1, -1}, {1, 1}), big);
  CHECK(std::abs(bb.value.real() - 1.0) < 3.0 * bb.std_error);
}

TEST_CASE("mc_integrate is deterministic per seed") {
  McConfig cfg;
  cfg.samples = 10'000;
  cfg.seed = 123456789;
  const Polygon tri = Polygon::triangle({0, 0}, {1, 0}, {0.3, 0.9});
  auto f = [](double x, double y) { return Complex{x * y, x - y}; };
  const McEstimate a = mc_integrate(f, tri, cfg);
  const McEstimate b = mc_integrate(f, tri, cfg);
  CHECK(a.value.real() == b.value.real());
  CHECK(a.value.imag() == b.value.imag());
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("mc agrees with quadrature for smooth integrands") {
  auto f = [](double x, double y) { return Complex{std::exp(x - y), std::cos(2 * x)}; };
  const Polygon region = Polygon::triangle({0, 0}, {1.5, 0.2}, {0.4, 1.1});
  const Complex q = integrate_polygon(f, region, 1.0);
  McConfig cfg;
  cfg.samples = 400'000;
  cfg.seed = 2024;
  const McEstimate m = mc_integrate(f, region, cfg);
  CHECK(std::abs(m.value - q) <= 4.0 * m.std_error);
}

TEST_CASE("QuadConfig and McConfig validation") {
  QuadConfig q;
  q.abs_tol = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  McConfig m;
  m.samples = 0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
