#include <cmath>
#include <numbers>

#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"

namespace mrft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Stencil {
  int half;
  double coeffs[7];  // offsets -half..half
  double denom;
};

// Fourth-order central stencils for derivative orders 1..4.
constexpr Stencil kStencils[4] = {
    {2, {1, -8, 0, 8, -1}, 12.0},
    {2, {-1, 16, -30, 16, -1}, 12.0},
    {3, {1, -8, 13, 0, -13, 8, -1}, 8.0},
    {3, {-1, 12, -39, 56, -39, 12, -1}, 6.0},
};

double stencil_derivative(const std::function<double(double)>& g, int order, double x, double h) {
  const Stencil& s = kStencils[order - 1];
  double acc = 0.0;
  for (int i = -s.half; i <= s.half; ++i) {
    const double c = s.coeffs[i + s.half];
    if (c != 0.0) acc += c * g(x + i * h);
  }
  return acc / (s.denom * std::pow(h, order));
}

double richardson(const std::function<double(double)>& g, int order, double x, double h) {
  return (16.0 * stencil_derivative(g, order, x, 0.5 * h) - stencil_derivative(g, order, x, h)) / 15.0;
}

double fd_recursive(const ScalarField& f, std::span<const int> order, std::vector<double>& coords,
                    std::span<const double> steps, std::size_t axis) {
  if (axis == coords.size()) return f(coords);
  if (order[axis] == 0) return fd_recursive(f, order, coords, steps, axis + 1);
  const double x0 = coords[axis];
  const std::function<double(double)> g = [&](double x) {
    coords[axis] = x;
    const double v = fd_recursive(f, order, coords, steps, axis + 1);
    coords[axis] = x0;
    return v;
  };
  return richardson(g, order[axis], x0, steps[axis]);
}

// Sum over multi-indices l with 1 <= l_j <= k_j (l_j = 0 when k_j = 0).
double ladder_sum(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> point,
                  double r_min) {
  const int m = provider.m();
  if (static_cast<int>(k.size()) != m || static_cast<int>(point.size()) != m)
    throw DomainError("ladder: k and point must have one entry per axis");
  int total_k = 0;
  for (int j = 0; j < m; ++j) {
    if (k[j] < 0 || k[j] > 20) throw DomainError("ladder: k must be in 0..20");
    if (!(point[j] >= r_min)) throw DomainError("ladder: radius below r_min");
    total_k += k[j];
  }
  std::vector<int> l(m);
  for (int j = 0; j < m; ++j) l[j] = k[j] == 0 ? 0 : 1;
  double sum = 0.0;
  for (;;) {
    double weight = 1.0;
    for (int j = 0; j < m; ++j)
      if (k[j] > 0) weight *= coefficient_value(k[j], l[j]) * std::pow(point[j], -(2 * k[j] - l[j]));
    sum += weight * provider(point, l);
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
  return sum / std::pow(kTwoPi, total_k);
}

}  // namespace

double fd_partial(const ScalarField& f, std::span<const int> order, std::span<const double> point,
                  const FdPolicy& policy) {
  if (order.size() != point.size()) throw DomainError("fd_partial: order and point sizes differ");
  std::vector<double> steps(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (order[j] < 0 || order[j] > 4) throw DomainError("fd_partial supports orders 0..4 per axis");
    steps[j] = std::max(policy.min_step, policy.rel_step * std::abs(point[j]));
    if (order[j] > 0) {
      const int half = kStencils[order[j] - 1].half;
      if (point[j] - half * steps[j] < policy.r_min) throw DomainError("fd_partial: stencil leaves the domain");
    }
  }
  std::vector<double> coords(point.begin(), point.end());
  return fd_recursive(f, order, coords, steps, 0);
}

DerivativeProvider DerivativeProvider::analytic(int m, PartialField partial) {
  if (!partial) throw CapabilityError("no analytic derivatives available");
  DerivativeProvider p;
  p.m_ = m;
  p.source_ = Source::analytic;
  p.partial_ = std::move(partial);
  return p;
}

DerivativeProvider DerivativeProvider::finite_difference(int m, ScalarField base, FdPolicy policy) {
  if (!base) throw CapabilityError("no base evaluator for finite differences");
  DerivativeProvider p;
  p.m_ = m;
  p.source_ = Source::finite_difference;
  p.partial_ = [base = std::move(base), policy](std::span<const double> point, std::span<const int> orders) {
    return fd_partial(base, orders, point, policy);
  };
  return p;
}

double DerivativeProvider::operator()(std::span<const double> point, std::span<const int> orders) const {
  if (static_cast<int>(point.size()) != m_ || static_cast<int>(orders.size()) != m_)
    throw DomainError("derivative request has the wrong number of axes");
  int total = 0;
  for (int o : orders) {
    if (o < 0) throw DomainError("negative derivative order");
    total += o;
  }
  if (source_ == Source::finite_difference && total > kMaxFdOrder)
    throw CapabilityError("finite-difference derivatives are limited to total order 3");
  return partial_(point, orders);
}

double raise_dimension(const ScalarField& dF, int axis, std::span<const double> point) {
  if (axis < 0 || axis >= static_cast<int>(point.size())) throw DomainError("raise_dimension: bad axis");
  const double r = point[axis];
  if (!(r > 0.0)) throw DomainError("raise_dimension requires r > 0");
  return -dF(point) / (kTwoPi * r);
}

double recursion_odd(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> point,
                     double r_min) {
  return ladder_sum(provider, k, point, r_min);
}

double recursion_even(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> point,
                      double r_min) {
  return ladder_sum(provider, k, point, r_min);
}

}  // namespace mrft
