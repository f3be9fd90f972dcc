#include "mrft/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "mrft/errors.hpp"

namespace mrft {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPanelCap = 0.5;

// 21-point Kronrod extension of the 10-point Gauss rule.
constexpr double kXgk[11] = {
    .995657163025808080735527280689003, .973906528517171720077964012084452,
    .930157491355708226001207180059508, .865063366688984510732096688423493,
    .780817726586416897063717578345042, .679409568299024406234327365114874,
    .562757134668604683339000099272694, .433395394129247190799265943165784,
    .294392862701460198131126603103866, .14887433898163121088482600112972, 0.};
constexpr double kWgk[11] = {
    .011694638867371874278064396062192, .03255816230796472747881897245939,
    .05475589657435199603138130024458,  .07503967481091995276704314091619,
    .093125454583697605535065465083366, .109387158802297641899210590325805,
    .123491976262065851077958109831074, .134709217311473325928054001771707,
    .142775938577060080797094273138717, .147739104901338491374841515972068,
    .149445554002916905664936468389821};
constexpr double kWg[5] = {
    .066671344308688137593568809893332, .149451349150580593145776339657697,
    .219086362515982043995534934228163, .269266719309996355091226921569469,
    .295524224714752870173892994651338};

struct Segment {
  double a, b, value, error, resabs;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw EvaluationError(x, "non-finite integrand value");
  return v;
}

Segment qk21(const Integrand& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);
  double fv1[10], fv2[10];
  const double fc = checked(f, centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = checked(f, centr - absc), f2 = checked(f, centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = checked(f, centr - absc), f2 = checked(f, centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    abserr = std::max(kEps * 50.0 * resabs, abserr);
  return {a, b, result, abserr, resabs};
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// Panel boundaries: scaled kernel zeros, refined to at most kPanelCap, up to `end`.
std::vector<double> lobe_boundaries(BesselOrder order, double rho, double end, int budget, bool& ok) {
  std::vector<double> cuts{0.0};
  ok = true;
  int k = 1;
  while (cuts.back() < end) {
    const double z = std::min(bessel_zero_estimate(order, k++) / rho, end);
    const double prev = cuts.back();
    const int pieces = std::max(1, static_cast<int>(std::ceil((z - prev) / kPanelCap)));
    for (int i = 1; i <= pieces; ++i) cuts.push_back(i == pieces ? z : prev + (z - prev) * i / pieces);
    if (static_cast<int>(cuts.size()) > budget + 1) {
      ok = false;
      return cuts;
    }
  }
  return cuts;
}

struct PanelSum {
  double value = 0.0, error = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

PanelSum integrate_panels(const Integrand& h, const std::vector<double>& cuts, const QuadratureSpec& spec,
                          double budget_tol, Edge last_edge) {
  PanelSum out;
  const double total = cuts.back() - cuts.front();
  QuadratureSpec local = spec;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1], b = cuts[i];
    if (b <= a) continue;
    local.tol = 0.5 * budget_tol * (b - a) / total;
    IntegralResult r;
    if (i + 1 == cuts.size() && last_edge == Edge::inverse_sqrt) {
      const double w = b - a;
      r = integrate_adaptive([&](double v) { return 2.0 * w * v * h(b - w * v * v); }, 0.0, 1.0, local);
    } else {
      r = integrate_adaptive(h, a, b, local);
    }
    out.value += r.value;
    out.error += r.error_estimate;
    out.subdivisions += r.subdivisions;
    out.converged = out.converged && r.converged;
  }
  out.converged = out.converged || out.error <= budget_tol;
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(tol >= 1e-14) || !std::isfinite(tol)) throw DomainError("quadrature tol must be >= 1e-14");
  if (!(rel_tol >= 0.0)) throw DomainError("quadrature rel_tol must be >= 0");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
  if (max_lobes < 4) throw DomainError("max_lobes must be >= 4");
  if (truncation_radius && !(*truncation_radius > 0.0)) throw DomainError("truncation_radius must be positive");
  if (!(max_evaluations > 0.0)) throw DomainError("max_evaluations must be positive");
}

double QuadratureSpec::target(double value) const { return std::max(tol, rel_tol * std::abs(value)); }

IntegralResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (!(a <= b)) throw DomainError("integrate_adaptive requires a <= b");
  IntegralResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  Segment first = qk21(f, a, b);
  double value = first.value, error = first.error;
  double frozen_value = 0.0, frozen_error = 0.0, roundoff = 0.0;
  heap.push(first);
  int subdivisions = 0;
  while (!heap.empty() && error > spec.target(value)) {
    if (subdivisions >= spec.max_subdivisions) break;
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    const bool at_floor = s.error <= 50.0 * kEps * s.resabs;
    if (at_floor || !(mid > s.a && mid < s.b) || (s.b - s.a) < 1e-15 * std::max(std::abs(s.a), std::abs(s.b))) {
      frozen_value += s.value;
      frozen_error += s.error;
      if (at_floor) roundoff += s.error;
      continue;
    }
    const Segment left = qk21(f, s.a, mid), right = qk21(f, mid, s.b);
    ++subdivisions;
    value += left.value + right.value - s.value;
    error += left.error + right.error - s.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to limit drift from incremental updates.
  double v = frozen_value, e = frozen_error;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  out.value = v;
  out.error_estimate = e;
  out.subdivisions = subdivisions;
  out.converged = e - roundoff <= spec.target(v);
  return out;
}

double cutoff_window(double x) { return 0.5 * std::erfc((x - 1.5) / (0.2 * std::numbers::sqrt2)); }

IntegralResult integrate_hankel(const RadialFunction& g, BesselOrder order, double rho, int power,
                                const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("integrate_hankel requires rho > 0");
  if (power < 0) throw DomainError("integrate_hankel requires power >= 0");
  const Integrand h = [&](double s) { return g.eval(s) * bessel_j_tilde(order, rho * s) * ipow(s, power); };
  IntegralResult out;
  bool ok = true;

  if (g.support) {
    const auto cuts = lobe_boundaries(order, rho, *g.support, spec.max_lobes, ok);
    out.lobes = static_cast<int>(cuts.size()) - 1;
    if (!ok) {
      out.converged = false;
      out.error_estimate = INFINITY;
      return out;
    }
    const PanelSum p = integrate_panels(h, cuts, spec, spec.tol, g.edge);
    out.value = p.value;
    out.error_estimate = p.error;
    out.subdivisions = p.subdivisions;
    out.converged = p.converged && p.error <= spec.target(p.value);
    return out;
  }

  switch (spec.acceleration) {
    case Acceleration::none: {
      double S;
      if (spec.truncation_radius) {
        S = *spec.truncation_radius;
      } else {
        // Tail bound C s^{power-p} |Jt(rho s)| <= K s^{-e}.
        const double e = g.decay_exponent - power + order.value() + 0.5;
        if (!(e > 1.0)) {
          out.converged = false;
          out.error_estimate = INFINITY;
          return out;
        }
        const double K = g.decay_constant * std::sqrt(2.0 / std::numbers::pi) * std::pow(rho, -order.value() - 0.5);
        S = std::pow(K / ((e - 1.0) * 0.1 * spec.tol), 1.0 / (e - 1.0));
        S = std::max(S, 1.0 / rho);
      }
      const auto cuts = lobe_boundaries(order, rho, S, spec.max_lobes, ok);
      out.lobes = static_cast<int>(cuts.size()) - 1;
      if (!ok) {
        out.converged = false;
        out.error_estimate = INFINITY;
        return out;
      }
      const PanelSum p = integrate_panels(h, cuts, spec, spec.tol, Edge::regular);
      out.value = p.value;
      out.error_estimate = p.error + 0.1 * spec.tol;
      out.subdivisions = p.subdivisions;
      out.converged = p.converged && out.error_estimate <= spec.target(p.value);
      return out;
    }
    case Acceleration::euler: {
      constexpr int kDepth = 12;
      std::vector<double> partial;
      double running = 0.0, quad_error = 0.0;
      double prev_est = NAN, prev_diff = INFINITY;
      QuadratureSpec local = spec;
      local.tol = std::max(spec.tol * 1e-2, 1e-14);
      double a = 0.0;
      for (int k = 1; k <= spec.max_lobes; ++k) {
        const double b = bessel_zero_estimate(order, k) / rho;
        const IntegralResult r = integrate_adaptive(h, a, b, local);
        a = b;
        running += r.value;
        quad_error += r.error_estimate;
        out.subdivisions += r.subdivisions;
        partial.push_back(running);
        out.lobes = k;
        const int depth = std::min<int>(kDepth, static_cast<int>(partial.size()) - 1);
        std::vector<double> w(partial.end() - depth - 1, partial.end());
        for (int d = 0; d < depth; ++d)
          for (std::size_t i = 0; i + 1 < w.size() - d; ++i) w[i] = 0.5 * (w[i] + w[i + 1]);
        const double est = w[0];
        const double diff = std::abs(est - prev_est);
        if (k >= 4 && diff <= spec.target(est) && prev_diff <= spec.target(est)) {
          out.value = est;
          out.error_estimate = diff + quad_error;
          out.converged = true;
          return out;
        }
        prev_diff = std::isnan(diff) ? INFINITY : diff;
        prev_est = est;
      }
      out.value = prev_est;
      out.error_estimate = prev_diff + quad_error;
      out.converged = false;
      return out;
    }
    case Acceleration::smooth_cutoff: {
      auto windowed = [&](double X, bool& fits) {
        const auto cuts = lobe_boundaries(order, rho, kCutoffReach * X, spec.max_lobes, fits);
        out.lobes = static_cast<int>(cuts.size()) - 1;
        if (!fits) return PanelSum{0.0, INFINITY, false, 0};
        const Integrand hw = [&](double s) { return h(s) * cutoff_window(s / X); };
        return integrate_panels(hw, cuts, spec, 0.5 * spec.tol, Edge::regular);
      };
      if (spec.truncation_radius) {
        const PanelSum p = windowed(*spec.truncation_radius, ok);
        out.value = p.value;
        out.error_estimate = p.error;
        out.subdivisions = p.subdivisions;
        out.converged = ok && p.converged;
        out.cutoff = *spec.truncation_radius;
        return out;
      }
      double X = 8.0 * std::clamp(1.0 / rho, 1.0, 8.0);
      double prev = NAN, prev_diff = INFINITY;
      for (;;) {
        const PanelSum p = windowed(X, ok);
        if (!ok) {
          out.converged = false;
          out.value = prev;
          out.error_estimate = prev_diff;
          return out;
        }
        out.subdivisions += p.subdivisions;
        const double diff = std::abs(p.value - prev);
        if (diff <= 0.5 * spec.target(p.value) && prev_diff <= 0.5 * spec.target(p.value)) {
          out.value = p.value;
          out.error_estimate = diff + p.error;
          out.converged = p.converged;
          out.cutoff = X;
          return out;
        }
        prev_diff = std::isnan(diff) ? INFINITY : diff;
        prev = p.value;
        X *= std::numbers::sqrt2;
      }
    }
  }
  return out;
}

IntegralResult integrate_abel(const Integrand& g, double r, double A, const QuadratureSpec& spec) {
  spec.validate();
  if (!(r >= 0.0)) throw DomainError("integrate_abel requires r >= 0");
  if (!(r < A)) throw DomainError("integrate_abel requires r < A");
  const double U = std::sqrt((A - r) * (A + r));
  const Integrand h = [&](double u) {
    const double w = std::sqrt(r * r + u * u);
    return g(w) / w;
  };
  return integrate_adaptive(h, 0.0, U, spec);
}

Eigen::ArrayXd cumulative_primitive(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& values, int times) {
  const Eigen::Index n = grid.size();
  if (values.size() != n) throw DomainError("cumulative_primitive: grid and values differ in size");
  if (n < 2) throw DomainError("cumulative_primitive needs at least two samples");
  if (times < 1) throw DomainError("cumulative_primitive: times must be >= 1");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(grid(i) > grid(i - 1))) throw DomainError("cumulative_primitive: grid must be strictly increasing");

  // 3-point Gauss rule integrates the cubic interpolant exactly.
  const double g3 = std::sqrt(0.6);
  const double gx[3] = {-g3, 0.0, g3};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Eigen::Index stencil = std::min<Eigen::Index>(4, n);

  // weights[i] holds the contribution of each stencil node to int_{x_i}^{x_{i+1}}.
  std::vector<std::pair<Eigen::Index, std::array<double, 4>>> rules(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Eigen::Index first = std::clamp<Eigen::Index>(i - 1, 0, n - stencil);
    std::array<double, 4> w{};
    const double a = grid(i), b = grid(i + 1), half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int q = 0; q < 3; ++q) {
      const double x = mid + half * gx[q];
      for (Eigen::Index j = 0; j < stencil; ++j) {
        double l = 1.0;
        for (Eigen::Index k = 0; k < stencil; ++k)
          if (k != j) l *= (x - grid(first + k)) / (grid(first + j) - grid(first + k));
        w[j] += gw[q] * half * l;
      }
    }
    rules[i] = {first, w};
  }

  Eigen::ArrayXd current = values;
  for (int pass = 0; pass < times; ++pass) {
    Eigen::ArrayXd next(n);
    next(0) = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const auto& [first, w] = rules[i];
      double s = 0.0;
      for (Eigen::Index j = 0; j < stencil; ++j) s += w[j] * current(first + j);
      next(i + 1) = next(i) + s;
    }
    current = std::move(next);
  }
  return current;
}

const NodeRule& gauss_legendre(int points) {
  if (points < 1 || points > 256) throw DomainError("gauss_legendre: points must be in [1, 256]");
  static std::mutex mutex;
  static std::map<int, NodeRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  NodeRule rule{Eigen::ArrayXd(points), Eigen::ArrayXd(points)};
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes(i) = x;
    rule.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

NodeRule composite_rule(double a, double b, double max_panel, int points, Edge edge) {
  if (!(b > a)) throw DomainError("composite_rule requires b > a");
  if (!(max_panel > 0.0)) throw DomainError("composite_rule requires max_panel > 0");
  const NodeRule& gl = gauss_legendre(points);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double h = (b - a) / panels;
  NodeRule out{Eigen::ArrayXd(panels * points), Eigen::ArrayXd(panels * points)};
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int q = 0; q < points; ++q) {
      const int i = p * points + q;
      if (p + 1 == panels && edge == Edge::inverse_sqrt) {
        const double v = 0.5 * (gl.nodes(q) + 1.0);
        out.nodes(i) = b - h * v * v;
        out.weights(i) = 0.5 * gl.weights(q) * 2.0 * h * v;
      } else {
        out.nodes(i) = lo + 0.5 * h * (gl.nodes(q) + 1.0);
        out.weights(i) = 0.5 * h * gl.weights(q);
      }
    }
  }
  return out;
}

}  // namespace mrft
