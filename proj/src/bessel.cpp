#include "mrft/bessel.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "mrft/errors.hpp"

namespace mrft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 6.0;

// sum_k (-1)^k (t/2)^{2k} / (2^nu k! Gamma(k+nu+1)) = t^-nu J_nu(t)
double series_tilde(double nu, double t) {
  const double x = 0.25 * t * t;
  double term = 1.0 / (std::exp2(nu) * std::tgamma(nu + 1.0));
  double sum = term;
  double peak = std::abs(term);
  for (int k = 1; k < 300; ++k) {
    term *= -x / (k * (k + nu));
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (k > x && std::abs(term) < 1e-18 * peak) break;
  }
  return sum;
}

// Hankel expansion; exact (terminating) for half-integer orders.
double hankel_asymptotic(double nu, double t) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0, q = 0.0;
  double a = 1.0;  // a_k(nu) / t^k
  double last = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (k * 8.0 * t);
    }
    if (a == 0.0) break;
    const double mag = std::abs(a);
    if (mag > last) break;  // asymptotic series starts diverging
    last = mag;
    const double signed_a = ((k / 2) % 2 == 0) ? a : -a;
    if (k % 2 == 0)
      p += signed_a;
    else
      q += signed_a;
    if (mag < 1e-17 * (std::abs(p) + std::abs(q))) break;
  }
  const double chi = t - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * t)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Downward recurrence normalized by sum rules or the order-1/2 closed forms.
double miller(double nu, double t) {
  const double frac = nu - std::floor(nu);
  const bool half = frac != 0.0;
  const double big = std::max(nu, t);
  const int top = static_cast<int>(big + 30.0 + 10.0 * std::sqrt(big));
  double jp1 = 0.0, j = 1e-300;
  double sum = 0.0, at_nu = 0.0;
  double j_half = 0.0, j_mhalf = 0.0;
  for (int k = top;; --k) {
    const double mu = frac + k;
    if (mu == nu) at_nu = j;
    if (!half && k % 2 == 0) sum += (k == 0 ? j : 2.0 * j);
    const double jm1 = 2.0 * mu / t * j - jp1;
    if (k == 0) {
      if (half) {
        j_half = j;
        j_mhalf = jm1;
      }
      break;
    }
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      sum *= 1e-250;
      at_nu *= 1e-250;
    }
  }
  if (!half) return at_nu / sum;
  const double s = std::sqrt(2.0 / (kPi * t));
  const double a_true = s * std::sin(t), b_true = s * std::cos(t);
  const double m = std::max(std::abs(j_half), std::abs(j_mhalf));
  const double a = j_half / m, b = j_mhalf / m;
  return (at_nu / m) * (a * a_true + b * b_true) / (a * a + b * b);
}

void check_argument(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("bessel argument must be finite and >= 0, got " + std::to_string(t));
}

double j_positive(BesselOrder order, double t) {
  const double nu = order.value();
  if (order.twice() == 1) return std::sqrt(2.0 / (kPi * t)) * std::sin(t);
  if (order.twice() == -1) return std::sqrt(2.0 / (kPi * t)) * std::cos(t);
  if (t <= kSeriesLimit) return std::pow(t, nu) * series_tilde(nu, t);
  if (order.half_integer()) {
    if (t >= std::max(kSeriesLimit, nu * nu)) return hankel_asymptotic(nu, t);
    return miller(nu, t);
  }
  if (t >= 25.0 + nu * nu) return hankel_asymptotic(nu, t);
  return miller(nu, t);
}

// McMahon expansion for large zero index.
double mcmahon(double nu, int k) {
  const double mu = 4.0 * nu * nu;
  const double b = (k + 0.5 * nu - 0.25) * kPi;
  const double e = 8.0 * b;
  return b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
         32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(e, 5));
}

constexpr int kOrders = BesselOrder::kMaxTwice - BesselOrder::kMinTwice + 1;

int table_size(BesselOrder order) { return 10 + std::max(order.twice(), 0); }

const std::vector<double>& zero_table(BesselOrder order) {
  static std::array<std::vector<double>, kOrders> tables;
  static std::array<std::once_flag, kOrders> flags;
  const int slot = order.twice() - BesselOrder::kMinTwice;
  std::call_once(flags[slot], [&] {
    auto& zs = tables[slot];
    const int want = table_size(order);
    const double step = 0.1;
    double a = std::max(order.value(), 0.0) + 1e-3;
    double fa = j_positive(order, a);
    while (static_cast<int>(zs.size()) < want) {
      const double b = a + step;
      const double fb = j_positive(order, b);
      if (fa == 0.0) {
        zs.push_back(a);
      } else if (fa * fb < 0.0) {
        double lo = a, hi = b, flo = fa;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = j_positive(order, mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        zs.push_back(0.5 * (lo + hi));
      }
      a = b;
      fa = fb;
    }
  });
  return tables[slot];
}

}  // namespace

BesselOrder BesselOrder::from_twice(int twice) {
  if (twice < kMinTwice || twice > kMaxTwice)
    throw DomainError("bessel order 2*nu=" + std::to_string(twice) + " outside [-1, 50]");
  return BesselOrder(twice);
}

BesselOrder BesselOrder::of(double nu) {
  const double twice = 2.0 * nu;
  if (!std::isfinite(twice) || twice != std::round(twice))
    throw DomainError("bessel order must be an integer or half-integer");
  return from_twice(static_cast<int>(twice));
}

BesselOrder BesselOrder::for_dimension(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(n));
  return from_twice(n - 2);
}

double bessel_j(BesselOrder order, double t) {
  check_argument(t);
  if (t == 0.0) {
    if (order.twice() == 0) return 1.0;
    if (order.twice() > 0) return 0.0;
    throw DomainError("J_{-1/2} is singular at 0");
  }
  return j_positive(order, t);
}

double bessel_j_tilde(BesselOrder order, double t) {
  check_argument(t);
  const double nu = order.value();
  if (t <= kSeriesLimit) return series_tilde(nu, t);
  if (order.twice() == -1) return std::sqrt(2.0 / kPi) * std::cos(t);
  if (order.twice() == 1) return std::sqrt(2.0 / kPi) * std::sin(t) / t;
  return j_positive(order, t) * std::exp(-nu * std::log(t));
}

double bessel_zero_estimate(BesselOrder order, int index) {
  if (index < 1) throw DomainError("zero index must be >= 1");
  if (order.twice() == 1) return index * kPi;
  if (order.twice() == -1) return (index - 0.5) * kPi;
  const auto& table = zero_table(order);
  if (index <= static_cast<int>(table.size())) return table[index - 1];
  return mcmahon(order.value(), index);
}

double bessel_j_int(int n, double t) {
  const int a = std::abs(n);
  if (a > BesselOrder::kMaxTwice / 2)
    throw DomainError("integer bessel order out of range: " + std::to_string(n));
  const double v = bessel_j(BesselOrder::from_twice(2 * a), std::abs(t));
  double sign = (n < 0 && a % 2 == 1) ? -1.0 : 1.0;
  if (t < 0.0 && a % 2 == 1) sign = -sign;
  return sign * v;
}

std::vector<double> bessel_j_int_derivatives(int n, double t, int max_order) {
  if (max_order < 0) throw DomainError("derivative order must be >= 0");
  std::vector<double> out(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    double acc = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * (k - j + 1) / j;
      acc += (j % 2 == 0 ? 1.0 : -1.0) * binom * bessel_j_int(n - k + 2 * j, t);
    }
    out[k] = std::ldexp(acc, -k);
  }
  return out;
}

}  // namespace mrft
