#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mrft/bessel.hpp"
#include "mrft/errors.hpp"
#include "oracle.hpp"

using namespace mrft;
using std::numbers::pi;

TEST_CASE("bessel: documented values") {
  CHECK(bessel_j(BesselOrder::of(0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(bessel_j(BesselOrder::of(0.5), pi)) < 1e-15);
  CHECK(std::abs(bessel_j(BesselOrder::of(0), 2.404825557695773)) < 1e-10);
  CHECK(bessel_j_tilde(BesselOrder::of(0), 0.0) == 1.0);
  CHECK(bessel_j_tilde(BesselOrder::of(0.5), 0.0) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-15));
  CHECK(bessel_j_tilde(BesselOrder::of(1), 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-13));
}

TEST_CASE("bessel: frozen high-precision values") {
  for (const auto& e : frozen()["bessel"]) {
    const int twice = e["twice"];
    const double t = e["t"], want = e["j"];
    const double got = bessel_j(BesselOrder::from_twice(twice), t);
    INFO("twice=" << twice << " t=" << t);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("bessel: std::cyl_bessel_j cross-check for t <= 50") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int twice = 0; twice <= 20; ++twice) {
    for (int i = 0; i < 40; ++i) {
      const double t = u(rng);
      const double want = std::cyl_bessel_j(0.5 * twice, t);
      CHECK(std::abs(bessel_j(BesselOrder::from_twice(twice), t) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("bessel: half-integer closed forms") {
  for (double t : {0.01, 0.7, 3.0, 17.5, 250.0}) {
    const double a = std::sqrt(2.0 / (pi * t));
    CHECK(std::abs(bessel_j(BesselOrder::of(0.5), t) - a * std::sin(t)) < 1e-13);
    CHECK(std::abs(bessel_j(BesselOrder::of(-0.5), t) - a * std::cos(t)) < 1e-13);
  }
}

TEST_CASE("bessel: derivative identity d/dt Jt_nu = -t Jt_{nu+1}") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  const double h = 1e-5;
  for (int twice : {0, 1, 2, 3, 4}) {
    const BesselOrder o = BesselOrder::from_twice(twice), o1 = BesselOrder::from_twice(twice + 2);
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      const double fd = (bessel_j_tilde(o, t + h) - bessel_j_tilde(o, t - h)) / (2 * h);
      const double want = -t * bessel_j_tilde(o1, t);
      CHECK(std::abs(fd - want) <= 1e-6 * std::max(std::abs(want), 1e-3));
    }
  }
}

TEST_CASE("bessel: three-term recurrence") {
  for (int nu = 1; nu <= 3; ++nu)
    for (double t = 0.5; t < 30.0; t += 0.37) {
      const double lhs = bessel_j_int(nu - 1, t) + bessel_j_int(nu + 1, t);
      const double rhs = 2.0 * nu / t * bessel_j_int(nu, t);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("bessel: raising identity (t J_1)' = t J_0") {
  const double h = 1e-5;
  for (double t = 0.3; t < 20.0; t += 0.9) {
    const double fd = ((t + h) * bessel_j_int(1, t + h) - (t - h) * bessel_j_int(1, t - h)) / (2 * h);
    CHECK(std::abs(fd - t * bessel_j_int(0, t)) <= 1e-6 * std::max(1.0, std::abs(t * bessel_j_int(0, t))));
  }
}

TEST_CASE("bessel: regime boundaries are continuous") {
  for (int twice : {0, 2, 8}) {
    const BesselOrder o = BesselOrder::from_twice(twice);
    for (double t : {6.0, 12.0, 25.0 + 0.25 * twice * twice}) {
      CHECK(std::abs(bessel_j(o, t * (1 + 1e-12)) - bessel_j(o, t * (1 - 1e-12))) < 1e-10);
    }
  }
}

TEST_CASE("bessel: integer orders by reflection") {
  CHECK(bessel_j_int(-1, 2.3) == doctest::Approx(-bessel_j_int(1, 2.3)).epsilon(1e-15));
  CHECK(bessel_j_int(-2, 2.3) == doctest::Approx(bessel_j_int(2, 2.3)).epsilon(1e-15));
  const auto d = bessel_j_int_derivatives(0, 1.7, 2);
  CHECK(d[1] == doctest::Approx(-bessel_j_int(1, 1.7)).epsilon(1e-13));
  CHECK(d[2] == doctest::Approx(-(bessel_j_int(0, 1.7) - bessel_j_int(2, 1.7)) / 2).epsilon(1e-13));
}

TEST_CASE("bessel: zero estimates") {
  CHECK(bessel_zero_estimate(BesselOrder::of(0), 1) == doctest::Approx(2.4048).epsilon(0.003 / 2.4048));
  for (int k = 1; k <= 30; ++k) CHECK(bessel_zero_estimate(BesselOrder::of(0.5), k) == doctest::Approx(k * pi).epsilon(1e-12));
  CHECK(std::abs(bessel_zero_estimate(BesselOrder::of(0), 100) - 99.75 * pi) < 0.01);
  for (const auto& e : frozen()["bessel_zeros"]) {
    const double want = e["zero"];
    CHECK(std::abs(bessel_zero_estimate(BesselOrder::from_twice(e["twice"]), e["k"]) - want) <= 1e-3 * want);
  }
  for (int twice : {-1, 0, 3, 12, 50}) {
    const BesselOrder o = BesselOrder::from_twice(twice);
    for (int k = 1; k < 60; ++k) CHECK(bessel_zero_estimate(o, k + 1) > bessel_zero_estimate(o, k));
  }
}

TEST_CASE("bessel: domain errors") {
  CHECK_THROWS_AS(BesselOrder::from_twice(-2), DomainError);
  CHECK_THROWS_AS(BesselOrder::from_twice(51), DomainError);
  CHECK_THROWS_AS(BesselOrder::of(0.3), DomainError);
  CHECK_THROWS_AS(bessel_j(BesselOrder::of(0), -1.0), DomainError);
  CHECK_THROWS_AS(bessel_zero_estimate(BesselOrder::of(0), 0), DomainError);
}
