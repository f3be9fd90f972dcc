#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"
#include "mrft/verify.hpp"
#include "oracle.hpp"

using namespace mrft;
using std::numbers::pi;

namespace {

QuadratureSpec with_tol(double tol) {
  QuadratureSpec q;
  q.tol = tol;
  return q;
}

Eigen::ArrayXd one(double r) { return Eigen::ArrayXd::Constant(1, r); }

double direct1(const RadialProfile& p, int n, double r, double tol = 1e-11) {
  return direct_transform(p, DimensionSignature({n}), {one(r)}, with_tol(tol)).values(0);
}

double d1(const PartialField& f, double w, int order) {
  const double x[1] = {w};
  const int o[1] = {order};
  return f(x, o);
}

}  // namespace

TEST_CASE("signature") {
  const DimensionSignature s = DimensionSignature::parse("3,1");
  CHECK(s.m() == 2);
  CHECK(s.n(0) == 3);
  CHECK(s.k(0) == 1);
  CHECK(s.k(1) == 0);
  CHECK(s.all_odd());
  CHECK(DimensionSignature::parse("4").k(0) == 1);
  CHECK(DimensionSignature::parse("2,2").all_even());
  CHECK(s.str() == "3,1");
  CHECK_THROWS_AS(DimensionSignature::parse("0"), DomainError);
  CHECK_THROWS_AS(DimensionSignature::parse("1,1,1,1,1"), DomainError);
  CHECK_THROWS_AS(DimensionSignature::parse("3,x"), DomainError);
  CHECK_THROWS_AS(DimensionSignature::parse(""), DomainError);
}

TEST_CASE("coefficients: documented values") {
  CHECK(coefficient(1, 1) == -1);
  CHECK(coefficient(2, 1) == -1);
  CHECK(coefficient(2, 2) == 1);
  CHECK(coefficient(3, 1) == -3);
  CHECK(coefficient(3, 2) == 3);
  CHECK(coefficient(3, 3) == -1);
  CHECK_THROWS_AS(coefficient(21, 1), DomainError);
  CHECK_THROWS_AS(coefficient(3, 0), DomainError);
  CHECK_THROWS_AS(coefficient(3, 4), DomainError);
}

TEST_CASE("coefficients: symbolic raising oracle") {
  for (const auto& e : frozen()["raising"]) {
    const int k = e["k"], l = e["l"];
    CHECK(format_rational(coefficient(k, l)) == e["c"].get<std::string>());
  }
  for (int k = 1; k <= 5; ++k) {
    const auto expansion = raising_expansion(k);
    CHECK(static_cast<int>(expansion.size()) == k);
    for (int l = 1; l <= k; ++l) CHECK(expansion.at({2 * k - l, l}) == coefficient(k, l));
  }
}

TEST_CASE("coefficients: sign and table") {
  const CoefficientTable t = coefficient_table(20);
  for (int k = 1; k <= 20; ++k)
    for (int l = 1; l <= k; ++l) CHECK((t.at(k, l) > 0) == (l % 2 == 0));
  CHECK(format_rational(Rational(3, 4)) == "3/2^2");
  CHECK(format_rational(Rational(-5)) == "-5");
  CHECK(coefficient_value(20, 1) == doctest::Approx(static_cast<double>(coefficient(20, 1))));
}

TEST_CASE("direct: Gaussian fixed point") {
  const RadialProfile g = catalog_get("gaussian");
  CHECK(std::abs(direct1(g, 3, 1.0) - std::exp(-pi)) < 1e-8);
  for (int n = 1; n <= 7; ++n) CHECK(std::abs(direct1(g, n, 0.7) - std::exp(-pi * 0.49)) < 1e-10);
  const RadialProfile g2 = catalog_get("gaussian", 2);
  const auto t = direct_transform(g2, DimensionSignature({3, 1}), {one(0.4), one(1.1)}, with_tol(1e-11));
  CHECK(std::abs(t.values(0) - std::exp(-pi * (0.16 + 1.21))) < 1e-10);
  CHECK(t.all_converged());
}

TEST_CASE("direct: frozen bump and bump_hat values") {
  const RadialProfile bump = catalog_get("bump");
  for (const auto& e : frozen()["bump_direct"]) {
    const double want = e["value"];
    INFO("n=" << e["n"].get<int>() << " r=" << e["r"].get<double>());
    CHECK(std::abs(direct1(bump, e["n"], e["r"]) - want) < 1e-9);
  }
  const RadialProfile bh = catalog_get("bump_hat");
  for (const auto& e : frozen()["bump_hat_direct"]) {
    const double want = e["value"];
    CHECK(std::abs(direct1(bh, e["n"], e["r"]) - want) < 1e-8);
  }
}

TEST_CASE("direct: n=1 is twice the cosine transform") {
  const RadialProfile bh = catalog_get("bump_hat");
  // F_1(phi) = phi_hat for a profile defined by its spectrum
  for (double r : {0.2, 0.5, 0.9, 1.5})
    CHECK(std::abs(direct1(bh, 1, r) - d1(bh.phi_hat, r, 0)) < 1e-10);
}

TEST_CASE("direct: grid layout and tiny radius") {
  const RadialProfile g2 = catalog_get("gaussian", 2);
  Eigen::ArrayXd a(2), b(3);
  a << 0.1, 0.2;
  b << 0.5, 1.0, 2.0;
  const auto t = direct_transform(g2, DimensionSignature({1, 1}), {a, b}, with_tol(1e-10));
  REQUIRE(t.size() == 6);
  CHECK(t.point(4) == std::vector<double>{0.2, 1.0});
  CHECK(std::abs(direct1(catalog_get("gaussian"), 3, 0.0) - 1.0) < 1e-10);
}

TEST_CASE("raise_dimension") {
  const ScalarField dg = [](std::span<const double> x) { return -2 * pi * x[0] * std::exp(-pi * x[0] * x[0]); };
  const double p[1] = {0.8};
  CHECK(raise_dimension(dg, 0, p) == doctest::Approx(std::exp(-pi * 0.64)).epsilon(1e-14));
  const ScalarField dsq = [](std::span<const double> x) { return 2 * x[0]; };
  CHECK(raise_dimension(dsq, 0, p) == doctest::Approx(-1 / pi).epsilon(1e-14));
  const double z[1] = {0.0};
  CHECK_THROWS_AS(raise_dimension(dsq, 0, z), DomainError);
}

TEST_CASE("fd_partial") {
  const ScalarField sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const ScalarField prod = [](std::span<const double> x) { return x[0] * x[1]; };
  const ScalarField g = [](std::span<const double> x) { return std::exp(-pi * x[0] * x[0]); };
  const int o1[1] = {1}, o11[2] = {1, 1};
  const double x1[1] = {1.0}, x11[2] = {1.0, 1.0};
  CHECK(std::abs(fd_partial(sq, o1, x1) - 2.0) < 1e-8);
  CHECK(std::abs(fd_partial(prod, o11, x11) - 1.0) < 1e-6);
  CHECK(std::abs(fd_partial(g, o1, x1) + 2 * pi * std::exp(-pi)) < 1e-7);
  FdPolicy pol;
  pol.r_min = 0.0;
  const double near0[1] = {1e-3};
  CHECK_THROWS_AS(fd_partial(sq, o1, near0, pol), DomainError);
}

TEST_CASE("recursion ladders") {
  const RadialProfile g = catalog_get("gaussian");
  const DerivativeProvider odd = DerivativeProvider::analytic(1, g.phi_hat);
  const DerivativeProvider even = DerivativeProvider::analytic(1, g.f2);
  const int k1[1] = {1}, k2[1] = {2};
  for (double r : {0.2, 0.9, 2.0}) {
    const double x[1] = {r};
    CHECK(recursion_odd(odd, k1, x) == doctest::Approx(std::exp(-pi * r * r)).epsilon(1e-12));
    CHECK(recursion_odd(odd, k2, x) == doctest::Approx(std::exp(-pi * r * r)).epsilon(1e-11));
    CHECK(recursion_even(even, k1, x) == doctest::Approx(std::exp(-pi * r * r)).epsilon(1e-12));
  }
  const RadialProfile g2 = catalog_get("gaussian", 2);
  const DerivativeProvider odd2 = DerivativeProvider::analytic(2, g2.phi_hat);
  const int k11[2] = {1, 1};
  const double x2[2] = {0.3, 0.6};
  CHECK(recursion_odd(odd2, k11, x2) == doctest::Approx(std::exp(-pi * 0.45)).epsilon(1e-12));

  const RadialProfile e3 = catalog_get("example3");
  const DerivativeProvider p3 = DerivativeProvider::analytic(1, e3.phi_hat);
  const double x[1] = {0.5};
  const double b = 2 * pi * std::sqrt(0.75);
  CHECK(std::abs(recursion_odd(p3, k1, x) + pi * bessel_j_int(1, b) / std::sqrt(0.75)) < 1e-12);

  const double tiny[1] = {1e-4};
  CHECK_THROWS_AS(recursion_odd(odd, k1, tiny), DomainError);
  const ScalarField zero = [](std::span<const double>) { return 0.0; };
  CHECK(recursion_even(DerivativeProvider::finite_difference(1, zero), k1, x) == 0.0);
}

TEST_CASE("recursion vs direct: bump_hat") {
  const RadialProfile bh = catalog_get("bump_hat");
  const DerivativeProvider odd = DerivativeProvider::analytic(1, bh.phi_hat);
  const DerivativeProvider even = DerivativeProvider::analytic(1, bh.f2);
  const int k1[1] = {1};
  for (double r : {0.2, 0.7, 1.6, 3.0}) {
    const double x[1] = {r};
    CHECK(std::abs(recursion_odd(odd, k1, x) - direct1(bh, 3, r)) < 1e-9);
    CHECK(std::abs(recursion_even(even, k1, x) - direct1(bh, 4, r)) < 1e-9);
  }
}

TEST_CASE("derivative provider capability") {
  const ScalarField f = [](std::span<const double> x) { return x[0]; };
  const DerivativeProvider fd = DerivativeProvider::finite_difference(1, f);
  CHECK(fd.source() == DerivativeProvider::Source::finite_difference);
  CHECK(fd.tolerance_factor() == 10.0);
  const double x[1] = {1.0};
  const int o4[1] = {4};
  CHECK_THROWS_AS(fd(x, o4), CapabilityError);
}

TEST_CASE("band-limited routes") {
  const RadialProfile bh = catalog_get("bump_hat");
  const QuadratureSpec q = with_tol(1e-12);
  const auto dphi = [&](double w) { return d1(bh.phi_hat, w, 1); };
  // measured constant -2 pi against the direct transform
  for (double r : {0.1, 0.45, 0.8}) CHECK(bandlimited_f2(dphi, 1.0, r, q) / direct1(bh, 2, r) ==
                                          doctest::Approx(-2 * pi).epsilon(1e-9));
  CHECK(bandlimited_f2(dphi, 1.0, 1.0, q) == 0.0);
  CHECK(bandlimited_f2(dphi, 1.0, 1.7, q) == 0.0);
  CHECK_THROWS_AS(bandlimited_f2(dphi, 0.0, 0.5, q), DomainError);

  const DerivativeProvider prov = DerivativeProvider::analytic(1, bh.phi_hat);
  const int k1[1] = {1};
  const double x[1] = {0.5};
  CHECK(bandlimited_odd_1d(prov, 1.0, 1, 0.5) == recursion_odd(prov, k1, x));
  CHECK(bandlimited_odd_1d(prov, 1.0, 1, 1.0) == 0.0);
  for (double r : {0.2, 0.6})
    CHECK(bandlimited_even_1d(prov, 1.0, 1, r, q, EvenForm::product_rule) / direct1(bh, 4, r) ==
          doctest::Approx(-2 * pi).epsilon(1e-9));

  const RadialProfile bh2 = catalog_get("bump_hat", 2);
  const DerivativeProvider prov2 = DerivativeProvider::analytic(2, bh2.phi_hat);
  const int k01[2] = {0, 1};
  const double x2[2] = {0.3, 0.4};
  CHECK_THROWS_AS(bandlimited_multiradial(prov2, 1.0, k01, Parity::even, x2, q), CapabilityError);
  const double out[2] = {0.3, 1.0};
  const int k00[2] = {0, 0};
  CHECK(bandlimited_multiradial(prov2, 1.0, k00, Parity::even, out, q) == 0.0);
}

TEST_CASE("Abel profile solution") {
  const RadialProfile bh = catalog_get("bump_hat");
  const QuadratureSpec q = with_tol(1e-12);
  const auto dphi = [&](double w) { return d1(bh.phi_hat, w, 1); };
  // f = -2 pi F_2(phi) on [0, A)
  for (double r : {0.2, 0.5}) CHECK(solve_abel_profile(dphi, 1.0, r, q) == doctest::Approx(-bandlimited_f2(dphi, 1.0, r, q)));
  CHECK(solve_abel_profile([](double) { return 0.0; }, 1.0, 0.3, q) == 0.0);
}

TEST_CASE("involution adjudication") {
  const std::vector<std::vector<double>> pts = {{0.15}, {0.4}, {0.8}, {1.3}};
  const InvolutionReport g = hankel_involution_residual(catalog_get("gaussian"), pts, with_tol(1e-11));
  REQUIRE(g.winner == 1);
  CHECK(g.candidates[1].sup_residual < 1e-10);
  CHECK(g.candidates[0].sup_residual > 1e-1);
}
