#include <cmath>
#include <numbers>

#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"

namespace mrft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_band(double A) {
  if (!(A > 0.0) || !std::isfinite(A)) throw DomainError("band limit A must be positive");
}

// Integrand of the even-dimension sums for one multi-index l.
double even_term(const DerivativeProvider& provider, std::span<const int> k, std::span<const int> l,
                 std::span<const double> w, EvenForm form) {
  const int m = static_cast<int>(k.size());
  std::vector<int> orders(m);
  if (form == EvenForm::printed) {
    double weight = 1.0;
    for (int j = 0; j < m; ++j) {
      weight *= std::pow(w[j], -(2 * k[j] - l[j]));
      orders[j] = l[j] + 1;
    }
    return weight * provider(w, orders);
  }
  // Product rule: d/dw [w^{-e} f] = w^{-e} f' - e w^{-e-1} f, expanded over all axes.
  double total = 0.0;
  for (int mask = 0; mask < (1 << m); ++mask) {
    double weight = 1.0;
    for (int j = 0; j < m; ++j) {
      const int e = 2 * k[j] - l[j];
      if (mask & (1 << j)) {
        if (e == 0) {
          weight = 0.0;
          break;
        }
        weight *= -e * std::pow(w[j], -e - 1);
        orders[j] = l[j];
      } else {
        weight *= std::pow(w[j], -e);
        orders[j] = l[j] + 1;
      }
    }
    if (weight != 0.0) total += weight * provider(w, orders);
  }
  return total;
}

// Sum over multi-indices 1 <= l_j <= k_j (l_j = 0 when k_j = 0) of c-weighted terms.
double even_sum(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> w, EvenForm form) {
  const int m = static_cast<int>(k.size());
  std::vector<int> l(m);
  for (int j = 0; j < m; ++j) l[j] = k[j] == 0 ? 0 : 1;
  double sum = 0.0;
  for (;;) {
    double c = 1.0;
    for (int j = 0; j < m; ++j)
      if (k[j] > 0) c *= coefficient_value(k[j], l[j]);
    sum += c * even_term(provider, k, l, w, form);
    int j = m - 1;
    while (j >= 0) {
      if (k[j] > 0 && l[j] < k[j]) {
        ++l[j];
        break;
      }
      l[j] = k[j] == 0 ? 0 : 1;
      --j;
    }
    if (j < 0) break;
  }
  return sum;
}

// Nested Abel integrals over every axis, r_j < A.
double nested_abel(const std::function<double(std::span<const double>)>& f, std::span<const double> r, double A,
                   const QuadratureSpec& spec) {
  const int m = static_cast<int>(r.size());
  std::vector<double> w(m);
  QuadratureSpec inner = spec;
  inner.tol = std::max(spec.tol * 0.1, 1e-14);
  std::function<double(int)> level = [&](int j) -> double {
    if (j == m) return f(w);
    const QuadratureSpec& s = j == 0 ? spec : inner;
    return integrate_abel(
               [&, j](double x) {
                 w[j] = x;
                 return level(j + 1);
               },
               r[j], A, s)
        .value;
  };
  return level(0);
}

}  // namespace

double bandlimited_f2(const std::function<double(double)>& phi_hat_prime, double A, double r,
                      const QuadratureSpec& spec) {
  check_band(A);
  if (!(r >= 0.0)) throw DomainError("bandlimited_f2 requires r >= 0");
  if (r >= A) return 0.0;
  return 2.0 * integrate_abel(phi_hat_prime, r, A, spec).value;
}

double bandlimited_odd_1d(const DerivativeProvider& provider, double A, int k, double r) {
  check_band(A);
  if (r >= A) return 0.0;
  const int ks[1] = {k};
  const double pt[1] = {r};
  return recursion_odd(provider, ks, pt);
}

double bandlimited_even_1d(const DerivativeProvider& provider, double A, int k, double r, const QuadratureSpec& spec,
                           EvenForm form) {
  check_band(A);
  if (k < 1) throw DomainError("bandlimited_even_1d requires k >= 1");
  if (!(r > 0.0)) throw DomainError("bandlimited_even_1d requires r > 0");
  if (r >= A) return 0.0;
  const int ks[1] = {k};
  const auto integrand = [&](double w) {
    const double pt[1] = {w};
    return even_sum(provider, ks, pt, form);
  };
  return 2.0 / std::pow(kTwoPi, k) * integrate_abel(integrand, r, A, spec).value;
}

double bandlimited_multiradial(const DerivativeProvider& provider, double A, std::span<const int> k, Parity parity,
                               std::span<const double> point, const QuadratureSpec& spec, EvenForm form) {
  check_band(A);
  const int m = provider.m();
  if (static_cast<int>(k.size()) != m || static_cast<int>(point.size()) != m)
    throw DomainError("bandlimited_multiradial: k and point need one entry per axis");
  int zeros = 0, total_k = 0;
  for (int j = 0; j < m; ++j) {
    if (k[j] < 0) throw DomainError("k must be >= 0");
    if (!(point[j] > 0.0)) throw DomainError("band-limited routes require r_j > 0");
    zeros += k[j] == 0;
    total_k += k[j];
  }
  if (zeros != 0 && zeros != m) throw CapabilityError("mixed k_j = 0 and k_j >= 1 regimes are not covered");
  for (int j = 0; j < m; ++j)
    if (point[j] >= A) return 0.0;
  if (parity == Parity::odd) return recursion_odd(provider, k, point);
  const auto integrand = [&](std::span<const double> w) { return even_sum(provider, k, w, form); };
  return std::pow(2.0, m) / std::pow(kTwoPi, total_k) * nested_abel(integrand, point, A, spec);
}

double solve_abel_profile(const std::function<double(double)>& phi_hat_prime, double A, double r,
                          const QuadratureSpec& spec) {
  check_band(A);
  return -2.0 * integrate_abel(phi_hat_prime, r, A, spec).value;
}

double solve_abel_profile_2d(const std::function<double(double, double)>& mixed_partial, double A, double r1,
                             double r2, const QuadratureSpec& spec) {
  check_band(A);
  const double pt[2] = {r1, r2};
  return 4.0 * nested_abel([&](std::span<const double> w) { return mixed_partial(w[0], w[1]); }, pt, A, spec);
}

}  // namespace mrft
