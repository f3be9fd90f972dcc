#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mrft/errors.hpp"
#include "mrft/quadrature.hpp"

using namespace mrft;
using std::numbers::pi;

namespace {

QuadratureSpec with_tol(double tol) {
  QuadratureSpec q;
  q.tol = tol;
  return q;
}

}  // namespace

TEST_CASE("adaptive: documented integrals") {
  const QuadratureSpec q = with_tol(1e-13);
  auto r = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, q);
  CHECK(std::abs(r.value - 1.0) < 1e-14);
  CHECK(r.converged);
  r = integrate_adaptive([](double x) { return std::cos(2 * pi * x); }, 0.0, 1.0, q);
  CHECK(std::abs(r.value) < 1e-13);
  r = integrate_adaptive([](double x) { return std::exp(-pi * x * x); }, 0.0, 6.0, q);
  CHECK(std::abs(r.value - 0.5) < 1e-12);
  CHECK(r.error_estimate <= q.tol);
}

TEST_CASE("adaptive: degenerate interval and errors") {
  const QuadratureSpec q = with_tol(1e-12);
  CHECK(integrate_adaptive([](double x) { return x; }, 2.0, 2.0, q).value == 0.0);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1.0, 0.0, q), DomainError);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / (x - 0.5) / 0.0; }, 0.0, 1.0, q), EvaluationError);
  try {
    integrate_adaptive([](double x) { return x > 0.3 ? std::numeric_limits<double>::quiet_NaN() : 0.0; }, 0.0, 1.0, q);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.abscissa > 0.3);
  }
}

TEST_CASE("adaptive: exhausted budget reports converged=false") {
  QuadratureSpec q = with_tol(1e-14);
  q.max_subdivisions = 2;
  const auto r = integrate_adaptive([](double x) { return std::sin(200 * x) * std::exp(x); }, 0.0, 10.0, q);
  CHECK_FALSE(r.converged);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(with_tol(1e-15).validate(), DomainError);
  QuadratureSpec q;
  q.max_lobes = 3;
  CHECK_THROWS_AS(q.validate(), DomainError);
  CHECK_NOTHROW(QuadratureSpec{}.validate());
}

TEST_CASE("hankel: Gaussian pair") {
  RadialFunction g{[](double s) { return std::exp(-pi * s * s); }, 1.0, 0.0, 6.5};
  const double r = 1.0;
  const auto res = integrate_hankel(g, BesselOrder::of(0), 2 * pi * r, 1, with_tol(1e-12));
  CHECK(std::abs(res.value - std::exp(-pi) / (2 * pi)) < 1e-8);
  CHECK(res.value == doctest::Approx(0.006877).epsilon(1e-3));
}

TEST_CASE("hankel: zero integrand and rho domain") {
  RadialFunction zero{[](double) { return 0.0; }, 1.0, 10.0};
  CHECK(integrate_hankel(zero, BesselOrder::of(0), 1.0, 1, with_tol(1e-10)).value == 0.0);
  CHECK_THROWS_AS(integrate_hankel(zero, BesselOrder::of(0), 0.0, 1, with_tol(1e-10)), DomainError);
}

TEST_CASE("hankel: conditionally convergent integrand with acceleration") {
  RadialFunction g{[](double s) {
                     const double q = std::sqrt(1 + s * s);
                     return std::sin(2 * pi * q) / q;
                   },
                   1.0, 1.0};
  for (Acceleration a : {Acceleration::euler, Acceleration::smooth_cutoff}) {
    QuadratureSpec q = with_tol(1e-8);
    q.acceleration = a;
    const auto res = integrate_hankel(g, BesselOrder::of(0), 2 * pi * 0.5, 1, q);
    CHECK(std::isfinite(res.value));
    if (a == Acceleration::smooth_cutoff) {
      CHECK(res.converged);
      // (2 pi) * hankel = direct n=2 = 2 pi cos(b)/b
      const double b = 2 * pi * std::sqrt(0.75);
      CHECK(std::abs(res.value - std::cos(b) / b) < 1e-6);
    }
  }
}

TEST_CASE("hankel: Weber-Schafheitlin selects 1/(2 pi t)") {
  for (double t : {0.7, 1.3})
    for (double s : {0.3 * t, 0.6 * t}) {
      RadialFunction g{[t](double r) { return bessel_j_int(1, 2 * pi * t * r); }, 1.0, 0.5};
      QuadratureSpec q = with_tol(1e-8);
      q.acceleration = Acceleration::smooth_cutoff;
      // J_0 = Jt_0, power 0
      const double v = integrate_hankel(g, BesselOrder::of(0), 2 * pi * s, 0, q).value;
      CHECK(std::abs(v - 1.0 / (2 * pi * t)) < 2e-3);
      CHECK(std::abs(v - 1.0 / t) > 2e-3);
    }
}

TEST_CASE("abel: documented integrals") {
  const QuadratureSpec q = with_tol(1e-13);
  CHECK(std::abs(integrate_abel([](double w) { return w; }, 1.0, 2.0, q).value - std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(integrate_abel([](double) { return 1.0; }, 1.0, 2.0, q).value - std::log(2 + std::sqrt(3.0))) <
        1e-12);
  CHECK_THROWS_AS(integrate_abel([](double) { return 1.0; }, 2.0, 2.0, q), DomainError);
  CHECK_THROWS_AS(integrate_abel([](double) { return 1.0; }, -0.1, 2.0, q), DomainError);
}

TEST_CASE("abel: pi/2 kernel identity on random pairs") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  const QuadratureSpec q = with_tol(1e-13);
  for (int i = 0; i < 20; ++i) {
    double y = u(rng), x = u(rng);
    if (y > x) std::swap(y, x);
    if (x - y < 1e-3) continue;
    // split at the midpoint so both endpoint singularities are square-root type
    const double mid = 0.5 * (y + x);
    const double a = integrate_abel([x](double w) { return w / std::sqrt((x - w) * (x + w)); }, y, mid, q).value;
    // second half: int_mid^x w dw/(sqrt(w^2-y^2) sqrt(x^2-w^2)) through v = sqrt(x^2 - w^2)
    const double h = std::sqrt((x - mid) * (x + mid));
    const double c = integrate_adaptive([x, y](double v) { return 1.0 / std::sqrt(x * x - v * v - y * y); }, 0.0, h, q)
                         .value;
    CHECK(std::abs(a + c - pi / 2) < 1e-10);
  }
}

TEST_CASE("cumulative primitive") {
  const Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(11, 0.0, 1.0);
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(11);
  CHECK((cumulative_primitive(g, ones, 1) - g).abs().maxCoeff() < 1e-15);
  CHECK((cumulative_primitive(g, ones, 2) - g.square() / 2).abs().maxCoeff() < 1e-15);
  CHECK((cumulative_primitive(g, g.cube(), 1) - g.pow(4) / 4).abs().maxCoeff() < 1e-15);
  const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(2001, 0.0, 10.0);
  CHECK((cumulative_primitive(x, x.cos(), 1) - x.sin()).abs().maxCoeff() < 1e-8);
  Eigen::ArrayXd bad = x;
  std::swap(bad(3), bad(4));
  CHECK_THROWS_AS(cumulative_primitive(bad, x, 1), DomainError);
}

TEST_CASE("gauss-legendre and composite rules") {
  const NodeRule& r = gauss_legendre(10);
  CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK((r.weights * r.nodes.pow(18)).sum() == doctest::Approx(2.0 / 19).epsilon(1e-14));
  const NodeRule c = composite_rule(0.0, 1.0, 0.25, 8, Edge::inverse_sqrt);
  const double v = (c.weights * (1.0 - c.nodes).sqrt().inverse()).sum();
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cutoff_window(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cutoff_window(kCutoffReach) < 1e-17);
}
