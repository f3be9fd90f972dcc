#include "mrft/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mrft/bessel.hpp"
#include "mrft/errors.hpp"
#include "mrft/multiplier.hpp"

namespace mrft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  void check(std::string name, bool passed, double measured, double tolerance, std::string detail = "") {
    out_.push_back({name_, std::move(name), passed, measured, tolerance, std::move(detail)});
  }
  // passes when |got - want| <= tol
  void close(std::string name, double got, double want, double tol, std::string detail = "") {
    const double d = std::abs(got - want);
    check(std::move(name), d <= tol, d, tol, std::move(detail));
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string name_;
  std::vector<CheckResult> out_;
};

Eigen::ArrayXd one(double r) { return Eigen::ArrayXd::Constant(1, r); }

double pt1(const PartialField& f, double r, int order) {
  const double p[1] = {r};
  const int o[1] = {order};
  return f(p, o);
}

// Power series in long double.
double series_oracle(double nu, double t) {
  long double sum = 0.0L;
  const long double x = 0.5L * t;
  for (int k = 0; k < 80; ++k) {
    const long double term = std::pow(x, 2.0L * k + nu) / (std::tgamma(static_cast<long double>(k + 1)) *
                                                            std::tgamma(static_cast<long double>(k + nu + 1)));
    sum += (k % 2 == 0 ? term : -term);
    if (k > t && std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Bessel's integral (1/pi) int_0^pi cos(n th - t sin th) dth, trapezoid rule.
double integral_oracle(int n, double t) {
  const int N = 400;
  long double s = 0.0L;
  for (int i = 0; i <= N; ++i) {
    const long double th = std::numbers::pi_v<long double> * i / N;
    const long double v = std::cos(n * th - t * std::sin(th));
    s += (i == 0 || i == N) ? 0.5L * v : v;
  }
  return static_cast<double>(s / N);
}

// Spherical-Bessel upward recurrence for half-integer orders (t >= order).
double half_integer_oracle(int twice, double t) {
  long double jm = std::sqrt(2.0L / (std::numbers::pi_v<long double> * t)) * std::cos(static_cast<long double>(t));
  long double j = std::sqrt(2.0L / (std::numbers::pi_v<long double> * t)) * std::sin(static_cast<long double>(t));
  if (twice == -1) return static_cast<double>(jm);
  for (int tw = 1; tw < twice; tw += 2) {
    const long double next = tw / static_cast<long double>(t) * j - jm;
    jm = j;
    j = next;
  }
  return static_cast<double>(j);
}

std::vector<CheckResult> bessel_suite(const VerifyOptions& o) {
  Suite s("bessel");
  std::mt19937_64 rng(o.seed);
  const auto J = [](double nu, double t) { return bessel_j(BesselOrder::of(nu), t); };
  const auto Jt = [](double nu, double t) { return bessel_j_tilde(BesselOrder::of(nu), t); };

  s.close("J_0(0) = 1", J(0, 0), 1.0, 1e-15);
  s.close("J_1/2(pi) = 0", J(0.5, kPi), 0.0, 1e-15);
  s.close("J_0 at its first zero", J(0, 2.404825557695773), 0.0, 1e-10);
  s.close("Jt_0(0) = 1", Jt(0, 0), 1.0, 1e-15);
  s.close("Jt_1/2(0) = sqrt(2/pi)", Jt(0.5, 0), std::sqrt(2.0 / kPi), 1e-15);
  s.close("Jt_1(1)", Jt(1, 1), series_oracle(1, 1), 1e-12);

  double worst = 0.0;
  for (int tw = -1; tw <= 12; ++tw)
    for (int i = 1; i <= 60; ++i) {
      const double t = 0.2 * i;
      const double ref = series_oracle(0.5 * tw, t);
      worst = std::max(worst, std::abs(J(0.5 * tw, t) - ref) / std::max(1.0, std::abs(ref)));
    }
  s.check("accuracy vs series, nu <= 6, t <= 12", worst <= 1e-12, worst, 1e-12);

  worst = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int i = 0; i <= 190; ++i) {
      const double t = 12.0 + 0.2 * i;
      worst = std::max(worst, std::abs(bessel_j_int(n, t) - integral_oracle(n, t)));
    }
  s.check("integer orders vs Bessel integral, 12 <= t <= 50", worst <= 1e-12, worst, 1e-12);

  worst = 0.0;
  for (int tw = 1; tw <= 11; tw += 2)
    for (int i = 0; i <= 190; ++i) {
      const double t = 12.0 + 0.2 * i;
      const double ref = half_integer_oracle(tw, t);
      worst = std::max(worst, std::abs(J(0.5 * tw, t) - ref) / std::max(1.0, std::abs(ref)));
    }
  s.check("half-integer orders vs upward recurrence, 12 <= t <= 50", worst <= 1e-12, worst, 1e-12);

  {
    std::uniform_real_distribution<double> u(0.1, 20.0);
    worst = 0.0;
    const double h = 1e-5;
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0})
      for (int i = 0; i < 50; ++i) {
        const double t = u(rng);
        const double fd = (Jt(nu, t + h) - Jt(nu, t - h)) / (2.0 * h);
        const double want = -t * Jt(nu + 1, t);
        worst = std::max(worst, std::abs(fd - want) / std::max(std::abs(want), 1e-3));
      }
    s.check("d/dt Jt_nu = -t Jt_{nu+1}", worst <= 1e-6, worst, 1e-6, "relative, floor 1e-3");
  }
  {
    std::uniform_real_distribution<double> u(0.5, 30.0);
    worst = 0.0;
    for (int nu = 1; nu <= 3; ++nu)
      for (int i = 0; i < 50; ++i) {
        const double t = u(rng);
        const double a = J(nu - 1, t), b = J(nu + 1, t), c = 2.0 * nu / t * J(nu, t);
        worst = std::max(worst, std::abs(a + b - c) / (std::abs(a) + std::abs(b) + std::abs(c)));
      }
    s.check("three-term recurrence", worst <= 1e-10, worst, 1e-10);
  }
  {
    std::uniform_real_distribution<double> u(0.5, 20.0);
    worst = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      const double fd = ((t + h) * J(1, t + h) - (t - h) * J(1, t - h)) / (2.0 * h);
      const double want = t * J(0, t);
      worst = std::max(worst, std::abs(fd - want) / std::max(std::abs(want), 1e-3));
    }
    s.check("d/dt (t J_1) = t J_0", worst <= 1e-6, worst, 1e-6, "relative, floor 1e-3");
  }
  worst = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 0.125 * i;
    const double c = std::sqrt(2.0 / (kPi * t));
    worst = std::max({worst, std::abs(J(0.5, t) - c * std::sin(t)), std::abs(J(-0.5, t) - c * std::cos(t))});
  }
  s.check("J_{+-1/2} closed forms", worst <= 1e-13, worst, 1e-13);

  s.close("first zero of J_0", bessel_zero_estimate(BesselOrder::of(0), 1), 2.4048, 0.003);
  s.close("100th zero of J_0", bessel_zero_estimate(BesselOrder::of(0), 100), 99.75 * kPi, 0.01);
  worst = 0.0;
  for (int k = 1; k <= 50; ++k)
    worst = std::max(worst, std::abs(bessel_zero_estimate(BesselOrder::of(0.5), k) - k * kPi));
  s.check("zeros of J_1/2 are k pi", worst <= 1e-9, worst, 1e-9);
  {
    worst = 0.0;
    bool increasing = true;
    for (int tw : {0, 1, 2, 5, 10, 20}) {
      const BesselOrder ord = BesselOrder::from_twice(tw);
      double prev = 0.0;
      for (int k = 1; k <= 60; ++k) {
        const double z = bessel_zero_estimate(ord, k);
        increasing = increasing && z > prev;
        prev = z;
        // bracket the true zero and bisect
        double a = z * (1.0 - 2e-3), b = z * (1.0 + 2e-3);
        double fa = bessel_j(ord, a);
        if (fa * bessel_j(ord, b) > 0.0) {
          worst = 1.0;
          continue;
        }
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b), fm = bessel_j(ord, m);
          if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        worst = std::max(worst, std::abs(z - 0.5 * (a + b)) / z);
      }
    }
    s.check("zero estimates within 1e-3 relative", worst <= 1e-3, worst, 1e-3);
    s.check("zero estimates strictly increasing", increasing, 0.0, 0.0);
  }
  {
    bool rejected = false;
    try {
      BesselOrder::of(-1.0);
    } catch (const DomainError&) {
      rejected = true;
    }
    s.check("order -1 rejected", rejected, 0.0, 0.0);
  }
  return s.take();
}

std::vector<CheckResult> abel_suite(const VerifyOptions& o) {
  Suite s("abel");
  std::mt19937_64 rng(o.seed);
  QuadratureSpec q;
  q.tol = 1e-13;

  s.close("int_0^1 1", integrate_adaptive([](double) { return 1.0; }, 0, 1, q).value, 1.0, 1e-14);
  s.close("int_0^1 cos(2 pi x)", integrate_adaptive([](double x) { return std::cos(kTwoPi * x); }, 0, 1, q).value,
          0.0, 1e-13);
  s.close("int_0^6 exp(-pi x^2)",
          integrate_adaptive([](double x) { return std::exp(-kPi * x * x); }, 0, 6, q).value,
          0.5 * std::erf(6.0 * std::sqrt(kPi)), 1e-12);

  s.close("Abel of w on (1,2)", integrate_abel([](double w) { return w; }, 1, 2, q).value, std::sqrt(3.0), 1e-12);
  s.close("Abel of 1 on (1,2)", integrate_abel([](double) { return 1.0; }, 1, 2, q).value,
          std::log(2.0 + std::sqrt(3.0)), 1e-12);
  {
    std::uniform_real_distribution<double> u(0.0, 3.0);
    QuadratureSpec qk;
    qk.tol = 1e-12;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      double y = u(rng), x = u(rng);
      if (y > x) std::swap(y, x);
      if (x - y < 1e-3) x = y + 1e-3;
      // lower half through the Abel rule, upper half with w = x - v^2
      const double mid = 0.5 * (x + y);
      const double lower = integrate_abel([&](double w) { return w / std::sqrt((x - w) * (x + w)); }, y, mid, qk).value;
      const double upper = integrate_adaptive(
                               [&](double v) {
                                 const double w = x - v * v;
                                 return 2.0 * w / (std::sqrt(2.0 * x - v * v) * std::sqrt((w - y) * (w + y)));
                               },
                               0.0, std::sqrt(x - mid), qk)
                               .value;
      const double v = lower + upper;
      worst = std::max(worst, std::abs(v - 0.5 * kPi));
    }
    s.check("kernel identity = pi/2 on 20 random pairs", worst <= 1e-10, worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (double r : {0.05, 0.3, 1.2}) {
      const double A = 2.0;
      const auto g = [](double w) { return std::cos(w) * std::exp(-0.3 * w); };
      const double u_sub = integrate_abel(g, r, A, q).value;
      // w = r + v^2
      const double direct = integrate_adaptive(
                                [&](double v) { return 2.0 * g(r + v * v) / std::sqrt(2.0 * r + v * v); }, 0.0,
                                std::sqrt(A - r), q)
                                .value;
      worst = std::max(worst, std::abs(u_sub - direct));
    }
    s.check("Abel substitution agrees with the endpoint-aware rule", worst <= 1e-8, worst, 1e-8);
  }
  {
    const Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(101, 0.0, 1.0);
    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(101);
    s.close("primitive of 1", (cumulative_primitive(g, ones, 1) - g).abs().maxCoeff(), 0.0, 1e-14);
    s.close("double primitive of 1", (cumulative_primitive(g, ones, 2) - 0.5 * g.square()).abs().maxCoeff(), 0.0,
            1e-14);
    const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(2001, 0.0, 10.0);
    s.close("primitive of cos", (cumulative_primitive(x, x.cos(), 1) - x.sin()).abs().maxCoeff(), 0.0, 1e-8);
  }
  {
    const RadialFunction g{[](double t) { return std::exp(-kPi * t * t); }, 1.0, 0.0, 6.5};
    QuadratureSpec h;
    h.tol = 1e-12;
    const double v = integrate_hankel(g, BesselOrder::of(0), kTwoPi, 1, h).value;
    s.close("Gaussian Hankel pair at r = 1", v, std::exp(-kPi) / kTwoPi, 1e-8);
    const RadialFunction zero{[](double) { return 0.0; }, 0.0, 0.0, 1.0};
    s.close("zero integrand", integrate_hankel(zero, BesselOrder::of(0), 3.0, 1, h).value, 0.0, 0.0);
  }
  {
    const RadialFunction g{[](double t) {
                             const double w = std::sqrt(1.0 + t * t);
                             return std::sin(kTwoPi * w) / w;
                           },
                           1.0, 1.0, std::nullopt};
    for (Acceleration acc : {Acceleration::euler, Acceleration::smooth_cutoff}) {
      QuadratureSpec h;
      h.tol = 1e-8;
      h.acceleration = acc;
      const IntegralResult r = integrate_hankel(g, BesselOrder::of(0), kTwoPi * 0.5, 1, h);
      s.check(std::string("conditionally convergent Hankel integral, ") +
                  (acc == Acceleration::euler ? "euler" : "smooth_cutoff"),
              r.converged && std::isfinite(r.value), r.error_estimate, h.tol, "value " + fmt(r.value));
    }
  }
  {
    // t int_0^inf J_1(2 pi t r) J_0(2 pi s r) dr for s < t
    QuadratureSpec h;
    h.tol = 1e-9;
    h.acceleration = Acceleration::smooth_cutoff;
    int votes_inv_t = 0, votes_other = 0, undecided = 0;
    double worst = 0.0;
    for (double t : {0.7, 1.3})
      for (double f : {0.3, 0.6}) {
        const double sv = f * t;
        const RadialFunction g{[t](double r) { return bessel_j_int(1, kTwoPi * t * r); },
                               std::sqrt(1.0 / (kPi * kPi * t)), 0.5, std::nullopt};
        const double v = integrate_hankel(g, BesselOrder::of(0), kTwoPi * sv, 0, h).value;
        const bool near_inv_t = std::abs(v - 1.0 / t) <= 2e-3;
        const bool near_other = std::abs(v - 1.0 / (kTwoPi * t)) <= 2e-3;
        if (near_inv_t == near_other) ++undecided;
        if (near_inv_t && !near_other) ++votes_inv_t;
        if (near_other && !near_inv_t) {
          ++votes_other;
          worst = std::max(worst, std::abs(v - 1.0 / (kTwoPi * t)));
        }
      }
    const bool ok = undecided == 0 && (votes_inv_t == 0 || votes_other == 0);
    s.check("Weber-Schafheitlin constant", ok, worst, 2e-3,
            votes_other == 4 ? "selected 1/(2 pi t)" : (votes_inv_t == 4 ? "selected 1/t" : "inconsistent"));
  }
  {
    bool monotone = true;
    const auto f = [](double x) { return std::exp(-kPi * x * x); };
    const double exact = 0.5 * std::erf(6.0 * std::sqrt(kPi));
    double prev = INFINITY;
    for (double tol = 1e-6; tol >= 1e-13; tol *= 0.5) {
      QuadratureSpec t;
      t.tol = tol;
      const double err = std::abs(integrate_adaptive(f, 0, 6, t).value - exact);
      if (err > std::max(prev, 4e-16)) monotone = false;
      prev = err;
    }
    s.check("halving tol never increases the error", monotone, 0.0, 0.0);
  }
  return s.take();
}

std::map<std::pair<int, int>, Rational> expansion_step(const std::map<std::pair<int, int>, Rational>& e) {
  // -(1/r) d/dr [r^{-j} phi^{(l)}] = j r^{-j-2} phi^{(l)} - r^{-j-1} phi^{(l+1)}
  std::map<std::pair<int, int>, Rational> out;
  for (const auto& [key, c] : e) {
    const auto [j, l] = key;
    if (j != 0) out[{j + 2, l}] += c * j;
    out[{j + 1, l + 1}] -= c;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

double rel_err(double got, double want, double floor) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

std::vector<CheckResult> ladder_suite(const VerifyOptions& o) {
  Suite s("ladder");
  QuadratureSpec q;
  q.tol = o.tol;

  s.check("c(1,1) = -1", coefficient(1, 1) == -1, 0, 0);
  s.check("c(2,1), c(2,2) = -1, 1", coefficient(2, 1) == -1 && coefficient(2, 2) == 1, 0, 0);
  s.check("c(3,.) = -3, 3, -1", coefficient(3, 1) == -3 && coefficient(3, 2) == 3 && coefficient(3, 3) == -1, 0, 0);
  {
    bool ok = true;
    for (int k = 1; k <= 5; ++k) {
      const auto e = raising_expansion(k);
      if (static_cast<int>(e.size()) != k) ok = false;
      for (int l = 1; l <= k; ++l) {
        const auto it = e.find({2 * k - l, l});
        if (it == e.end() || it->second != coefficient(k, l)) ok = false;
      }
    }
    s.check("raising operator iterated symbolically reproduces c(k,l), k <= 5", ok, 0, 0, "exact rationals");
  }

  const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(50, 0.1, 4.0);
  const RadialProfile gauss = catalog_get("gaussian");
  for (int n = 1; n <= 5; ++n) {
    const SampledTransform t = direct_transform(gauss, DimensionSignature({n}), {R}, q);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < R.size(); ++i) {
      const double want = std::exp(-kPi * R(i) * R(i));
      worst = std::max(worst, std::abs(t.values(i) - want) / std::max(want, 1e-6));
    }
    s.check("Gaussian fixed point, direct n=" + std::to_string(n), worst <= 1e-6 && t.all_converged(), worst, 1e-6);
  }
  s.close("Gaussian n=3 at r=1", direct_transform(gauss, DimensionSignature({3}), {one(1.0)}, q).values(0),
          std::exp(-kPi), 1e-8);

  const Eigen::ArrayXd L = Eigen::ArrayXd::LinSpaced(20, 0.2, 3.0);
  for (const char* name : {"gaussian", "bump_hat"}) {
    const RadialProfile p = catalog_get(name);
    const DerivativeProvider odd = DerivativeProvider::analytic(1, p.phi_hat);
    const DerivativeProvider even = DerivativeProvider::analytic(1, p.f2);
    for (int k : {1, 2}) {
      const SampledTransform d = direct_transform(p, DimensionSignature({2 * k + 1}), {L}, q);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < L.size(); ++i) {
        const int kk[1] = {k};
        const double r[1] = {L(i)};
        worst = std::max(worst, std::abs(recursion_odd(odd, kk, r) - d.values(i)) / std::max(std::abs(d.values(i)), 1e-4));
      }
      s.check(std::string(name) + ": odd ladder k=" + std::to_string(k) + " vs direct", worst <= 1e-5, worst, 1e-5,
              "relative, floor 1e-9 absolute");
    }
    const SampledTransform d4 = direct_transform(p, DimensionSignature({4}), {L}, q);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < L.size(); ++i) {
      const int kk[1] = {1};
      const double r[1] = {L(i)};
      worst = std::max(worst, std::abs(recursion_even(even, kk, r) - d4.values(i)) / std::max(std::abs(d4.values(i)), 1e-5));
    }
    s.check(std::string(name) + ": even ladder k=1 vs direct", worst <= 1e-4, worst, 1e-4);
  }
  {
    // base F_2 from direct quadrature, derivatives by finite differences
    const RadialProfile p = catalog_get("bump_hat");
    const DerivativeProvider fd = DerivativeProvider::finite_difference(1, [&](std::span<const double> x) {
      return direct_transform(p, DimensionSignature({2}), {one(x[0])}, q).values(0);
    });
    const SampledTransform d4 = direct_transform(p, DimensionSignature({4}), {L}, q);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < L.size(); ++i) {
      const int kk[1] = {1};
      const double r[1] = {L(i)};
      worst = std::max(worst, std::abs(recursion_even(fd, kk, r) - d4.values(i)) / std::max(std::abs(d4.values(i)), 1e-5));
    }
    s.check("bump_hat: even ladder on finite-differenced direct F_2", worst <= 1e-4 * fd.tolerance_factor(), worst,
            1e-4 * fd.tolerance_factor());
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k)
      for (int m = 1; m <= 2; ++m) {
        const RadialProfile g = catalog_get("gaussian", m);
        const DerivativeProvider odd = DerivativeProvider::analytic(m, g.phi_hat);
        const DerivativeProvider even = DerivativeProvider::analytic(m, g.f2);
        const std::vector<int> kk(m, k);
        for (double r : {0.3, 0.9, 1.7}) {
          const std::vector<double> x(m, r);
          const double want = std::exp(-kPi * m * r * r);
          worst = std::max(worst, rel_err(recursion_odd(odd, kk, x), want, 1e-9));
          if (k <= 2) worst = std::max(worst, rel_err(recursion_even(even, kk, x), want, 1e-9));
        }
      }
    s.check("Gaussian fixed point, all ladders n <= 7, m <= 2", worst <= 1e-6, worst, 1e-6);
  }
  {
    const ScalarField gauss_d = [](std::span<const double> r) { return -kTwoPi * r[0] * std::exp(-kPi * r[0] * r[0]); };
    const double r[1] = {0.8};
    s.close("raise_dimension of exp(-pi r^2)", raise_dimension(gauss_d, 0, r), std::exp(-kPi * 0.64), 1e-15);
    const ScalarField square_d = [](std::span<const double> x) { return 2.0 * x[0]; };
    s.close("raise_dimension of r^2", raise_dimension(square_d, 0, r), -1.0 / kPi, 1e-15);
  }
  {
    const RadialProfile p = catalog_get("bump_hat");
    const ScalarField f1 = [&](std::span<const double> x) {
      return direct_transform(p, DimensionSignature({1}), {one(x[0])}, q).values(0);
    };
    const SampledTransform d3 = direct_transform(p, DimensionSignature({3}), {L}, q);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < L.size(); ++i) {
      const double r[1] = {L(i)};
      const int o1[1] = {1};
      const ScalarField dF = [&](std::span<const double> x) { return fd_partial(f1, o1, x); };
      worst = std::max(worst, std::abs(raise_dimension(dF, 0, r) - d3.values(i)));
    }
    s.check("bump_hat: raised n=1 transform vs direct n=3", worst <= 1e-5, worst, 1e-5);
  }
  {
    const ScalarField sq = [](std::span<const double> x) { return x[0] * x[0]; };
    const ScalarField prod = [](std::span<const double> x) { return x[0] * x[1]; };
    const ScalarField g = [](std::span<const double> x) { return std::exp(-kPi * x[0] * x[0]); };
    const double one_pt[1] = {1.0}, two_pt[2] = {1.0, 1.0};
    const int d1[1] = {1}, d11[2] = {1, 1};
    s.close("fd d/dr r^2 at 1", fd_partial(sq, d1, one_pt), 2.0, 1e-8);
    s.close("fd d2/dr1dr2 r1 r2", fd_partial(prod, d11, two_pt), 1.0, 1e-6);
    s.close("fd d/dr exp(-pi r^2) at 1", fd_partial(g, d1, one_pt), -kTwoPi * std::exp(-kPi), 1e-7);
  }
  {
    const RadialProfile e3 = catalog_get("example3");
    const DerivativeProvider prov = DerivativeProvider::analytic(1, e3.phi_hat);
    double worst = 0.0;
    for (double r : {0.3, 0.5, 0.7}) {
      const double b = kTwoPi * std::sqrt(1.0 - r * r);
      const int kk[1] = {1};
      const double x[1] = {r};
      worst = std::max(worst, std::abs(recursion_odd(prov, kk, x) + kPi * bessel_j_int(1, b) / std::sqrt(1.0 - r * r)));
    }
    s.check("example3: odd ladder k=1 vs chain-rule closed form", worst <= 1e-10, worst, 1e-10);
  }
  return s.take();
}

std::vector<CheckResult> involution_suite(const VerifyOptions& o) {
  Suite s("involution");
  QuadratureSpec q;
  q.tol = o.tol;
  const auto report = [&](const std::string& label, const InvolutionReport& r, double lose_min) {
    const auto& win = r.candidates[r.winner];
    const auto& lose = r.candidates[1 - r.winner];
    s.check(label, win.sup_residual < 1e-4 && lose.sup_residual > lose_min, win.sup_residual, 1e-4,
            "selected " + win.label + " (residual " + fmt(win.sup_residual) + "; " + lose.label + " residual " +
                fmt(lose.sup_residual) + ")");
  };
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({0.15 + 0.19 * i});
  report("bump, m=1", hankel_involution_residual(catalog_get("bump"), pts, q), 1e-1);
  report("gaussian, m=1", hankel_involution_residual(catalog_get("gaussian"), pts, q), 1e-1);
  // per-axis constants are squared for m=2, so the gap between candidates shrinks
  report("gaussian, m=2", hankel_involution_residual(catalog_get("gaussian", 2), {{0.2, 0.3}, {0.5, 0.1}, {0.4, 0.8}}, q),
         1e-2);
  {
    RadialProfile zero = catalog_get("bump");
    zero.phi = [](std::span<const double>) { return 0.0; };
    const InvolutionReport r = hankel_involution_residual(zero, {{0.5}, {1.0}}, q);
    s.check("zero profile", r.candidates[0].sup_residual == 0.0 && r.candidates[1].sup_residual == 0.0, 0.0, 0.0);
  }
  return s.take();
}

std::vector<CheckResult> bandlimited_suite(const VerifyOptions& o) {
  Suite s("bandlimited");
  QuadratureSpec q;
  q.tol = o.tol;
  QuadratureSpec qa;
  qa.tol = 1e-12;
  const RadialProfile bh = catalog_get("bump_hat");
  const auto php = [&](double w) { return pt1(bh.phi_hat, w, 1); };
  {
    const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(15, 0.1, 0.8);
    const SampledTransform d = direct_transform(bh, DimensionSignature({2}), {R}, q);
    std::vector<double> c;
    for (Eigen::Index i = 0; i < R.size(); ++i) c.push_back(bandlimited_f2(php, 1.0, R(i), qa) / d.values(i));
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    const double mean = 0.5 * (*lo + *hi);
    const double spread = (*hi - *lo) / std::abs(mean);
    std::string verdict = "matches neither 1 nor 2pi";
    if (std::abs(mean - 1.0) < 1e-3) verdict = "matches 1";
    if (std::abs(mean - kTwoPi) < 1e-3 * kTwoPi) verdict = "matches 2pi";
    if (std::abs(mean + kTwoPi) < 1e-3 * kTwoPi) verdict = "equals -2pi: magnitude 2pi, opposite sign";
    s.check("bump_hat: f2 formula / direct n=2 is constant", spread <= 1e-3, spread, 1e-3,
            "c = " + fmt(mean) + "; " + verdict);
  }
  {
    const RadialProfile e3 = catalog_get("example3");
    int p_hits = 0, c_hits = 0;
    std::string values;
    for (double r : {0.3, 0.5, 0.7}) {
      const SampledTransform d = direct_transform(e3, DimensionSignature({2}), {one(r)}, q);
      const auto ref = reference_value("example3", DimensionSignature({2}), std::vector<double>{r});
      const double scaled = d.values(0) / kTwoPi;
      p_hits += std::abs(scaled - ref.candidates[0].value) <= 1e-2;
      c_hits += std::abs(scaled - ref.candidates[1].value) <= 1e-2;
      values += " r=" + fmt(r) + ": direct/(2pi)=" + fmt(scaled) + " P=" + fmt(ref.candidates[0].value) +
                " C=" + fmt(ref.candidates[1].value) + ";";
    }
    const bool decided = (p_hits == 3) != (c_hits == 3);
    s.check("example3: closed-form candidate vs regularized direct", decided, 0.0, 1e-2,
            std::string(p_hits == 3 ? "cos-form P" : (c_hits == 3 ? "one-minus-cos form C" : "none")) +
                " matches;" + values);
    // phi_hat(A) != 0 here, so the f2 formula keeps the boundary term 2 phi_hat(A) / sqrt(A^2 - r^2)
    const auto dphi = [&](double w) { return pt1(e3.phi_hat, w, 1); };
    const double edge = pt1(e3.phi_hat, 1.0 - 1e-15, 0);
    double worst = 0.0;
    for (double r : {0.3, 0.5, 0.7}) {
      const SampledTransform d = direct_transform(e3, DimensionSignature({2}), {one(r)}, q);
      const double want = -kTwoPi * d.values(0) + 2.0 * edge / std::sqrt(1.0 - r * r);
      worst = std::max(worst, std::abs(bandlimited_f2(dphi, 1.0, r, qa) - want));
    }
    s.check("example3: f2 formula = -2pi direct + boundary term", worst <= 1e-6, worst, 1e-6,
            "phi_hat(A) = " + fmt(edge));
  }
  {
    bool zero = true;
    const DerivativeProvider prov = DerivativeProvider::analytic(1, bh.phi_hat);
    for (double r : {1.0, 1.3, 7.0}) {
      zero = zero && bandlimited_f2(php, 1.0, r, qa) == 0.0;
      zero = zero && bandlimited_odd_1d(prov, 1.0, 1, r) == 0.0;
      zero = zero && bandlimited_even_1d(prov, 1.0, 1, r, qa) == 0.0;
    }
    s.check("band-limited outputs vanish for r >= A", zero, 0.0, 0.0);
    s.close("f2 of phi' = 0 is 0", bandlimited_f2([](double) { return 0.0; }, 1.0, 0.4, qa), 0.0, 0.0);
  }
  {
    const RadialProfile e3 = catalog_get("example3");
    const DerivativeProvider prov = DerivativeProvider::analytic(1, e3.phi_hat);
    const double b = kTwoPi * std::sqrt(0.75);
    s.close("example3: odd 1-D band-limited k=1 at r=0.5", bandlimited_odd_1d(prov, 1.0, 1, 0.5),
            -kPi * bessel_j_int(1, b) / std::sqrt(0.75), 1e-10);
    const int kk[1] = {1};
    const double x[1] = {0.5};
    s.close("odd 1-D band-limited equals the odd ladder", bandlimited_odd_1d(prov, 1.0, 1, 0.5),
            recursion_odd(prov, kk, x), 1e-12);
  }
  {
    const DerivativeProvider prov = DerivativeProvider::analytic(1, bh.phi_hat);
    const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(8, 0.1, 0.8);
    const SampledTransform d4 = direct_transform(bh, DimensionSignature({4}), {R}, q);
    std::string detail;
    std::vector<std::string> matching;
    double best_spread = INFINITY;
    for (EvenForm form : {EvenForm::printed, EvenForm::product_rule}) {
      std::vector<double> c;
      for (Eigen::Index i = 0; i < R.size(); ++i) c.push_back(bandlimited_even_1d(prov, 1.0, 1, R(i), qa, form) / d4.values(i));
      const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
      const double spread = (*hi - *lo) / std::abs(0.5 * (*lo + *hi));
      const std::string label = form == EvenForm::printed ? "printed" : "product_rule";
      detail += label + ": c in [" + fmt(*lo) + ", " + fmt(*hi) + "]; ";
      if (spread <= 1e-3) {
        matching.push_back(label);
        best_spread = std::min(best_spread, spread);
      }
    }
    s.check("bump_hat: even k=1 formula / direct n=4 is constant for exactly one form", matching.size() == 1,
            best_spread, 1e-3, (matching.size() == 1 ? "selected " + matching[0] + "; " : "") + detail);
  }
  {
    // raising the f2 formula must agree with the even k=1 formula
    const DerivativeProvider prov = DerivativeProvider::analytic(1, bh.phi_hat);
    const ScalarField f2 = [&](std::span<const double> x) { return bandlimited_f2(php, 1.0, x[0], qa); };
    double worst_printed = 0.0, worst_product = 0.0;
    for (double r : {0.2, 0.4, 0.6}) {
      const double x[1] = {r};
      const int o1[1] = {1};
      const ScalarField dF = [&](std::span<const double> y) { return fd_partial(f2, o1, y); };
      const double raised = raise_dimension(dF, 0, x);
      worst_printed = std::max(worst_printed, std::abs(raised - bandlimited_even_1d(prov, 1.0, 1, r, qa, EvenForm::printed)));
      worst_product =
          std::max(worst_product, std::abs(raised - bandlimited_even_1d(prov, 1.0, 1, r, qa, EvenForm::product_rule)));
    }
    s.check("raised f2 formula vs even k=1 formula", std::min(worst_printed, worst_product) <= 1e-3,
            std::min(worst_printed, worst_product), 1e-3,
            "printed residual " + fmt(worst_printed) + ", product_rule residual " + fmt(worst_product));
  }
  {
    double worst15 = 0.0, worst18 = 0.0;
    QuadratureSpec qi;
    qi.tol = 1e-11;
    for (double x : {0.3, 1.1, 2.7}) {
      const double v = integrate_adaptive(
                           [&](double u) {
                             return solve_abel_profile(php, 1.0, u, qa) * bessel_j_int(0, kTwoPi * u * x) * u;
                           },
                           0.0, 1.0, qi)
                           .value;
      const double px[1] = {x};
      worst15 = std::max(worst15, std::abs(v - bh.phi(px)));
    }
    for (double w : {0.2, 0.5, 0.8}) {
      const double v =
          integrate_abel([&](double u) { return solve_abel_profile(php, 1.0, u, qa) * u; }, w, 1.0, qa).value / kPi;
      worst18 = std::max(worst18, std::abs(v - pt1(bh.phi_hat, w, 0)));
    }
    s.check("bump_hat: Abel solution reproduces phi", worst15 <= 1e-4, worst15, 1e-4);
    s.check("bump_hat: Abel solution reproduces phi_hat", worst18 <= 1e-5, worst18, 1e-5);
    s.close("Abel solution of phi' = 0", solve_abel_profile([](double) { return 0.0; }, 1.0, 0.3, qa), 0.0, 0.0);
  }
  return s.take();
}

std::vector<CheckResult> multiradial_suite(const VerifyOptions& o) {
  Suite s("multiradial");
  QuadratureSpec q;
  q.tol = o.tol;
  QuadratureSpec qa;
  qa.tol = 1e-12;
  {
    const RadialProfile g = catalog_get("gaussian", 2);
    const Eigen::ArrayXd R = Eigen::ArrayXd::LinSpaced(50, 0.1, 4.0);
    for (auto dims : {std::vector<int>{1, 1}, std::vector<int>{3, 3}, std::vector<int>{3, 1}}) {
      const DimensionSignature sig(dims);
      const SampledTransform t = direct_transform(g, sig, {R, R}, q);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        const auto p = t.point(i);
        const double want = std::exp(-kPi * (p[0] * p[0] + p[1] * p[1]));
        worst = std::max(worst, std::abs(t.values(i) - want) / std::max(want, 1e-6));
      }
      s.check("Gaussian fixed point, direct " + sig.str(), worst <= 1e-6 && t.all_converged(), worst, 1e-6);
    }
  }
  const RadialProfile bh = catalog_get("bump_hat");
  const RadialProfile bh2 = catalog_get("bump_hat", 2);
  const Eigen::ArrayXd G = Eigen::ArrayXd::LinSpaced(3, 0.2, 0.7);
  {
    const SampledTransform d = direct_transform(bh2, DimensionSignature({2, 2}), {G, G}, q);
    const DerivativeProvider prov = DerivativeProvider::analytic(2, bh2.phi_hat);
    const double per_axis = -kTwoPi;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const auto p = d.point(i);
      const int kk[2] = {0, 0};
      const double v = bandlimited_multiradial(prov, 1.0, kk, Parity::even, p, qa);
      worst = std::max(worst, std::abs(v / (per_axis * per_axis) - d.values(i)) / std::abs(d.values(i)));
    }
    s.check("bump_hat x bump_hat: k=0 formula vs direct (2,2) with constant (-2pi)^2", worst <= 1e-3, worst, 1e-3);
  }
  {
    const RadialProfile e3 = catalog_get("example3");
    const RadialProfile e32 = product_profile(e3, 2);
    const DerivativeProvider prov = DerivativeProvider::analytic(2, e32.phi_hat);
    const auto d1 = [&](double w) { return pt1(e3.phi_hat, w, 1); };
    double worst = 0.0;
    for (double r1 : {0.3, 0.6})
      for (double r2 : {0.2, 0.5}) {
        const int kk[2] = {0, 0};
        const double x[2] = {r1, r2};
        const double v = bandlimited_multiradial(prov, 1.0, kk, Parity::even, x, qa);
        const double w = bandlimited_f2(d1, 1.0, r1, qa) * bandlimited_f2(d1, 1.0, r2, qa);
        worst = std::max(worst, std::abs(v - w) / std::max(std::abs(w), 1e-12));
      }
    s.check("example3 x example3: nested Abel factorizes", worst <= 1e-8, worst, 1e-8);
  }
  {
    const DerivativeProvider prov = DerivativeProvider::analytic(2, bh2.phi_hat);
    bool zero = true;
    for (auto x : {std::vector<double>{1.0, 0.3}, std::vector<double>{0.3, 1.5}}) {
      const int k0[2] = {0, 0}, k1[2] = {1, 1};
      zero = zero && bandlimited_multiradial(prov, 1.0, k0, Parity::even, x, qa) == 0.0;
      zero = zero && bandlimited_multiradial(prov, 1.0, k1, Parity::even, x, qa, EvenForm::product_rule) == 0.0;
      zero = zero && bandlimited_multiradial(prov, 1.0, k1, Parity::odd, x, qa) == 0.0;
    }
    s.check("multiradial band-limited outputs vanish outside (0,A)^2", zero, 0.0, 0.0);
  }
  {
    const SampledTransform d = direct_transform(bh2, DimensionSignature({3, 1}), {G, G}, q);
    const SampledTransform a = direct_transform(bh, DimensionSignature({3}), {G}, q);
    const SampledTransform b = direct_transform(bh, DimensionSignature({1}), {G}, q);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      worst = std::max(worst, std::abs(d.values(i) - a.values(i / G.size()) * b.values(i % G.size())));
    s.check("bump_hat: direct (3,1) equals the product of 1-D transforms", worst <= 2e-5, worst, 2e-5);
    const DerivativeProvider prov = DerivativeProvider::analytic(2, bh2.phi_hat);
    double worst_r = 0.0;
    const SampledTransform d33 = direct_transform(bh2, DimensionSignature({3, 3}), {G, G}, q);
    for (Eigen::Index i = 0; i < d33.size(); ++i) {
      const int kk[2] = {1, 1};
      worst_r = std::max(worst_r, std::abs(recursion_odd(prov, kk, d33.point(i)) - d33.values(i)));
    }
    s.check("bump_hat: odd ladder (1,1) vs direct (3,3)", worst_r <= 2e-5, worst_r, 2e-5);
  }
  {
    QuadratureSpec qe = q;
    qe.tol = 1e-8;
    qe.rel_tol = 1e-8;
    const auto probe = [&](const std::string& name, const std::vector<int>& dims,
                           const std::vector<std::vector<double>>& pts) {
      const RadialProfile p = catalog_get(name);
      const DimensionSignature sig(dims);
      std::vector<double> ratios;
      bool converged = true, match = true;
      std::string values;
      for (const auto& x : pts) {
        const SampledTransform d = direct_transform(p, sig, {one(x[0]), one(x[1])}, qe);
        const double ref = reference_value(name, sig, x).candidates[0].value;
        converged = converged && d.converged(0);
        match = match && std::abs(ref - d.values(0)) <= 1e-3 * std::max(1.0, std::abs(ref));
        ratios.push_back(ref / d.values(0));
        values += " (" + fmt(x[0]) + "," + fmt(x[1]) + "): direct " + fmt(d.values(0)) + " reference " + fmt(ref) + ";";
      }
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      const bool consistent = (*hi - *lo) <= 1e-6 * std::abs(*lo);
      std::string detail = match ? "reference matches;" : "DISCREPANCY: reference/direct = " + fmt(*lo) + ";";
      s.check(name + " " + sig.str() + ": direct vs printed reference", converged && (match || consistent),
              match ? 0.0 : *lo, 1e-3, detail + values);
    };
    probe("example1", {1, 1}, {{0.1, 0.4}, {0.3, 0.7}, {0.5, 0.4}, {0.2, 0.9}, {0.45, 0.25}});
    probe("example2", {2, 1}, {{0.1, 0.1}, {0.1, 0.3}, {0.3, 0.1}, {0.3, 0.3}, {0.2, 0.15}});
  }
  return s.take();
}

std::vector<CheckResult> multiplier_suite(const VerifyOptions&) {
  Suite s("multiplier");
  const double c2 = 1.0 / (kTwoPi * kTwoPi);
  const BilinearSymbol& one_s = symbol_get("constant");
  const BilinearSymbol& xy = symbol_get("xy");
  const BilinearSymbol& demo = symbol_get("demo");

  s.close("M3 of 1", primitive_Mn(one_s, 3, 0.7, 1.3), 0.25 * 0.49 * 1.69, 1e-12);
  s.close("M3 of xy", primitive_Mn(xy, 3, 0.7, 1.3), std::pow(0.7, 3) / 6 * std::pow(1.3, 3) / 6, 1e-12);
  {
    // midpoint Riemann sum, 10^6 points, of int int (1-s)(1-t) m(s,t)
    const int N = 1000;
    double sum = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double x = (i + 0.5) / N, y = (j + 0.5) / N;
        sum += (1 - x) * (1 - y) * demo(x, y);
      }
    sum /= double(N) * N;
    s.close("demo: M3(1,1) vs brute-force Riemann sum", primitive_Mn(demo, 3, 1.0, 1.0), sum, 1e-6);
    const double a = 0.5 - kPi / 4 + std::log(2.0) / 2;
    s.close("demo: M3(1,1) closed form", primitive_Mn(demo, 3, 1.0, 1.0), a * a, 1e-10);
  }
  {
    QuadratureSpec q;
    q.tol = 1e-14;
    double worst = 0.0;
    const double grid[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    for (const auto& name : symbol_names()) {
      const BilinearSymbol& sym = symbol_get(name);
      for (double r1 : grid)
        for (double r2 : grid) {
          const double dbl = integrate_adaptive(
                                 [&](double x) {
                                   return integrate_adaptive([&](double y) { return sym(x, y); }, 0, r2, q).value;
                                 },
                                 0, r1, q)
                                 .value;
          worst = std::max(worst, std::abs(transform_symbol(sym, 3, r1, r2) - c2 * dbl / (r1 * r2)));
        }
    }
    s.check("n=3 lift equals the (r1 r2)^-1 double primitive, all symbols", worst <= 1e-8, worst, 1e-8);
  }
  s.close("lift of 1 is 1/(2pi)^2", transform_symbol(one_s, 3, 0.4, 2.2), c2, 1e-14);
  s.close("lift of xy", transform_symbol(xy, 3, 0.4, 2.2), c2 * 0.4 * 2.2 / 4, 1e-14);
  {
    BilinearSymbol scaled = xy;
    scaled.m = [](double x, double y) { return 4.0 * x * y; };
    scaled.partial = nullptr;
    double worst = 0.0;
    for (double r1 : {0.25, 0.5, 1.5})
      for (double r2 : {0.5, 2.0})
        worst = std::max(worst, std::abs(transform_symbol(scaled, 3, r1, r2) - transform_symbol(xy, 3, 2 * r1, 2 * r2)));
    s.check("scaling covariance, lambda = 2", worst <= 1e-8, worst, 1e-8);
  }
  {
    BilinearSymbol mono{"x2y2", [](double x, double y) { return x * x * y * y; }, true, nullptr};
    const double want3 = c2 * 0.81 * 1.44 / 9.0;
    s.close("monomial x^2 y^2, n=3", transform_symbol(mono, 3, 0.9, 1.2), want3, 1e-12);
    // n=5: sum_l c(2,l) / (4-l)! per axis
    const double per = -1.0 / 6.0 + 1.0 / 2.0;
    const double want5 = std::pow(kTwoPi, -4) * per * per;
    s.close("constant symbol, n=5", transform_symbol(one_s, 5, 0.9, 1.2), want5, 1e-12);
  }
  {
    const SymbolPartial p = symbol_partial(one_s);
    s.close("seminorm (0,0) of 1", seminorm(p, 0, 0).value, 1.0, 1e-15);
    s.close("seminorm (1,0) of 1", seminorm(p, 1, 0).value, 0.0, 1e-15);
    s.close("seminorm (0,0) of xi eta / ((1+xi^2)(1+eta^2))", seminorm(symbol_partial(symbol_get("xy_damped")), 0, 0).value,
            0.25, 1e-12);
    const GridMax g = seminorm(symbol_partial(symbol_get("sin")), 1, 0);
    s.check("seminorm (1,0) of sin xi is flagged unsettled", !g.converged, g.value, 0.0,
            "grid max " + fmt(g.value));
  }
  {
    const PreservationReport r = preservation_report(one_s, 3, 0);
    s.close("constant symbol: seminorm ratio 1/(2pi)^2", r.ratios.at({0, 0}), c2, 1e-10);
    const PreservationReport d = preservation_report(demo, 3, 1);
    double worst = 0.0;
    for (const auto& [k, v] : d.ratios) worst = std::max(worst, v);
    s.check("demo symbol, n=3: ratios finite up to (1,1)", d.preserved, worst, INFINITY);
    bool rejected = false;
    try {
      preservation_report(symbol_get("xy_damped"), 3, 1);
    } catch (const DomainError&) {
      rejected = true;
    }
    s.check("non-bi-even symbol rejected", rejected, 0.0, 0.0);
  }
  return s.take();
}

}  // namespace

std::map<std::pair<int, int>, Rational> raising_expansion(int k) {
  if (k < 0) throw DomainError("raising_expansion needs k >= 0");
  std::map<std::pair<int, int>, Rational> e{{{0, 0}, Rational(1)}};
  for (int i = 0; i < k; ++i) e = expansion_step(e);
  return e;
}

std::vector<std::string> suite_names() {
  return {"bessel", "abel", "ladder", "involution", "bandlimited", "multiradial", "multiplier"};
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, options);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "bessel") return bessel_suite(options);
  if (suite == "abel") return abel_suite(options);
  if (suite == "ladder") return ladder_suite(options);
  if (suite == "involution") return involution_suite(options);
  if (suite == "bandlimited") return bandlimited_suite(options);
  if (suite == "multiradial") return multiradial_suite(options);
  if (suite == "multiplier") return multiplier_suite(options);
  throw LookupError("unknown suite '" + suite + "'");
}

}  // namespace mrft
