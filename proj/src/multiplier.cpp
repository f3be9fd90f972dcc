#include "mrft/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mrft/errors.hpp"

namespace mrft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int lift_k(int n) {
  if (n % 2 == 0) throw CapabilityError("lifts are defined for odd n only");
  if (n != 3 && n != 5) throw CapabilityError("lifts are implemented for n = 3 and n = 5");
  return (n - 1) / 2;
}

// Separable symbol f(xi) g(eta) from one-variable derivative tables.
using Factor = std::function<double(double, int)>;

BilinearSymbol separable(std::string name, bool bi_even, Factor f, Factor g) {
  BilinearSymbol s;
  s.name = std::move(name);
  s.bi_even = bi_even;
  s.m = [f, g](double x, double y) { return f(x, 0) * g(y, 0); };
  s.partial = [f, g](double x, double y, int a, int b) { return f(x, a) * g(y, b); };
  return s;
}

double one(double, int a) { return a == 0 ? 1.0 : 0.0; }

double identity(double t, int a) { return a == 0 ? t : (a == 1 ? 1.0 : 0.0); }

// t^2/(1+t^2)
double saturating(double t, int a) {
  const double q = 1.0 + t * t;
  switch (a) {
    case 0: return t * t / q;
    case 1: return 2.0 * t / (q * q);
    case 2: return (2.0 - 6.0 * t * t) / (q * q * q);
    default: throw CapabilityError("analytic partials stop at order 2");
  }
}

// t/(1+t^2)
double damped(double t, int a) {
  const double q = 1.0 + t * t;
  switch (a) {
    case 0: return t / q;
    case 1: return (1.0 - t * t) / (q * q);
    case 2: return (2.0 * t * t * t - 6.0 * t) / (q * q * q);
    default: throw CapabilityError("analytic partials stop at order 2");
  }
}

double sine(double t, int a) {
  switch (a % 4) {
    case 0: return std::sin(t);
    case 1: return std::cos(t);
    case 2: return -std::sin(t);
    default: return -std::cos(t);
  }
}

const std::vector<BilinearSymbol>& catalog() {
  static const std::vector<BilinearSymbol> symbols = {
      separable("constant", true, one, one),
      separable("xy", false, identity, identity),
      separable("demo", true, saturating, saturating),
      separable("xy_damped", false, damped, damped),
      separable("sin", false, sine, one),
  };
  return symbols;
}

// 4-point Lagrange stencil around x.
struct Stencil {
  Eigen::Index first;
  double w[4];
};

Stencil stencil(const Eigen::ArrayXd& g, double x) {
  const Eigen::Index n = g.size();
  if (!(x >= g(0) && x <= g(n - 1))) throw DomainError("point lies outside the primitive grid");
  Eigen::Index i = std::upper_bound(g.data(), g.data() + n, x) - g.data() - 1;
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  Stencil s{std::clamp<Eigen::Index>(i - 1, 0, n - 4), {}};
  for (int j = 0; j < 4; ++j) {
    double l = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) l *= (x - g(s.first + k)) / (g(s.first + j) - g(s.first + k));
    s.w[j] = l;
  }
  return s;
}

void check_grid(const Eigen::ArrayXd& g) {
  if (g.size() < 4) throw DomainError("primitive grids need at least four nodes");
  if (g(0) != 0.0) throw DomainError("primitive grids start at 0");
}

// d^i/dr^i r^{-a}
double power_derivative(double r, int a, int i) {
  double c = 1.0;
  for (int t = 0; t < i; ++t) c *= -(a + t);
  return c * std::pow(r, -a - i);
}

double binomial(int n, int k) { return k == 0 || k == n ? 1.0 : static_cast<double>(n); }  // n <= 2

GridMax grid_max(const std::function<double(double, double)>& f, const LogGrid& grid) {
  const std::vector<double> nodes = grid.nodes(true);
  GridMax base, ext;
  auto inside = [&](double x) { return x >= grid.lo * (1.0 - 1e-12) && x <= grid.hi * (1.0 + 1e-12); };
  for (double x : nodes)
    for (double y : nodes) {
      double v;
      try {
        v = std::abs(f(x, y));
      } catch (const DomainError&) {
        if (inside(x) && inside(y)) ++base.skipped;
        continue;
      }
      if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
      if (v > ext.value) ext = {v, x, y, true, 0};
      if (inside(x) && inside(y) && v > base.value) {
        base.value = v;
        base.xi = x;
        base.eta = y;
      }
    }
  base.converged = std::isfinite(base.value) && ext.value <= base.value * (1.0 + grid.settle_tol) + 1e-12;
  return base;
}

}  // namespace

void require_bi_even(const BilinearSymbol& symbol) {
  if (!symbol.m) throw DomainError("symbol has no evaluator");
  static const double pts[][2] = {{0.3, 0.7}, {1.1, 2.5}, {4.0, 0.2}, {7.3, 9.1}, {0.05, 13.0}};
  for (const auto& p : pts) {
    const double v = symbol(p[0], p[1]);
    const double scale = 1e-12 * (1.0 + std::abs(v));
    if (std::abs(symbol(-p[0], p[1]) - v) > scale || std::abs(symbol(p[0], -p[1]) - v) > scale)
      throw DomainError("symbol '" + symbol.name + "' is not bi-even");
  }
}

const BilinearSymbol& symbol_get(const std::string& name) {
  for (const auto& s : catalog())
    if (s.name == name) return s;
  throw LookupError("unknown symbol '" + name + "'");
}

std::vector<std::string> symbol_names() {
  std::vector<std::string> names;
  for (const auto& s : catalog()) names.push_back(s.name);
  return names;
}

SymbolPartial symbol_partial(const BilinearSymbol& symbol, const FdPolicy& policy) {
  if (symbol.partial) return symbol.partial;
  return [m = symbol.m, policy](double x, double y, int a, int b) {
    if (a == 0 && b == 0) return m(x, y);
    const ScalarField f = [&m](std::span<const double> p) { return m(p[0], p[1]); };
    const double p[2] = {x, y};
    const int o[2] = {a, b};
    return fd_partial(f, o, p, policy);
  };
}

SymbolPrimitives::SymbolPrimitives(const BilinearSymbol& symbol, Eigen::ArrayXd grid1, Eigen::ArrayXd grid2,
                                   const FdPolicy& policy)
    : grid1_(std::move(grid1)), grid2_(std::move(grid2)) {
  check_grid(grid1_);
  check_grid(grid2_);
  FdPolicy whole_plane = policy;
  whole_plane.r_min = -std::numeric_limits<double>::infinity();
  partial_ = symbol_partial(symbol, whole_plane);
}

const Eigen::MatrixXd& SymbolPrimitives::table(int f1, int f2) const {
  auto it = tables_.find({f1, f2});
  if (it != tables_.end()) return it->second;
  const Eigen::Index n1 = grid1_.size(), n2 = grid2_.size();
  const int d1 = std::max(0, -f1), d2 = std::max(0, -f2);
  Eigen::MatrixXd t(n1, n2);
  for (Eigen::Index j = 0; j < n2; ++j)
    for (Eigen::Index i = 0; i < n1; ++i) {
      const double v = partial_(grid1_(i), grid2_(j), d1, d2);
      if (!std::isfinite(v)) throw EvaluationError(grid1_(i), "non-finite symbol value");
      t(i, j) = v;
    }
  if (f1 > 0)
    for (Eigen::Index j = 0; j < n2; ++j) t.col(j) = cumulative_primitive(grid1_, t.col(j).array(), f1).matrix();
  if (f2 > 0)
    for (Eigen::Index i = 0; i < n1; ++i)
      t.row(i) = cumulative_primitive(grid2_, t.row(i).transpose().array(), f2).matrix().transpose();
  return tables_.emplace(std::make_pair(f1, f2), std::move(t)).first->second;
}

double SymbolPrimitives::operator()(int f1, int f2, double r1, double r2) const {
  const Eigen::MatrixXd& t = table(f1, f2);
  const Stencil s1 = stencil(grid1_, r1), s2 = stencil(grid2_, r2);
  double v = 0.0;
  for (int j = 0; j < 4; ++j) {
    if (s2.w[j] == 0.0) continue;
    double col = 0.0;
    for (int i = 0; i < 4; ++i) col += s1.w[i] * t(s1.first + i, s2.first + j);
    v += s2.w[j] * col;
  }
  return v;
}

Eigen::ArrayXd graded_grid(double reach, double h_min, double ratio) {
  if (!(reach > 0.0) || !(h_min > 0.0) || !(ratio > 0.0)) throw DomainError("graded grid needs positive parameters");
  std::vector<double> x{0.0};
  const double knee = h_min / ratio;
  while (x.back() < reach) {
    const double h = x.back() < knee ? h_min : ratio * x.back();
    x.push_back(std::min(x.back() + h, reach));
  }
  while (x.size() < 4) x.insert(x.end() - 1, 0.5 * (x[x.size() - 2] + x.back()));
  return Eigen::Map<Eigen::ArrayXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

double primitive_Mn(const BilinearSymbol& symbol, int n, double r1, double r2, int resolution) {
  lift_k(n);
  if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw DomainError("primitive radii must be >= 0");
  if (resolution < 4) throw DomainError("resolution must be >= 4");
  if (r1 == 0.0 || r2 == 0.0) return 0.0;
  const SymbolPrimitives p(symbol, Eigen::ArrayXd::LinSpaced(resolution, 0.0, r1),
                           Eigen::ArrayXd::LinSpaced(resolution, 0.0, r2));
  return p(n - 1, n - 1, r1, r2);
}

LiftedSymbol::LiftedSymbol(const BilinearSymbol& symbol, int n, Eigen::ArrayXd grid1, Eigen::ArrayXd grid2,
                           const FdPolicy& policy)
    : n_(n), k_(lift_k(n)), primitives_(symbol, std::move(grid1), std::move(grid2), policy) {}

double LiftedSymbol::operator()(double r1, double r2, int d1, int d2) const {
  if (d1 < 0 || d2 < 0 || d1 > 2 || d2 > 2) throw CapabilityError("lifted partials cover orders 0..2 per axis");
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("lifted symbol needs positive radii");
  double sum = 0.0;
  for (int l1 = 1; l1 <= k_; ++l1)
    for (int l2 = 1; l2 <= k_; ++l2) {
      const int a1 = 2 * k_ - l1, a2 = 2 * k_ - l2;
      double term = 0.0;
      for (int i1 = 0; i1 <= d1; ++i1)
        for (int i2 = 0; i2 <= d2; ++i2)
          term += binomial(d1, i1) * binomial(d2, i2) * power_derivative(r1, a1, i1) *
                  power_derivative(r2, a2, i2) * primitives_(a1 - (d1 - i1), a2 - (d2 - i2), r1, r2);
      sum += coefficient_value(k_, l1) * coefficient_value(k_, l2) * term;
    }
  return sum * std::pow(kTwoPi, -2 * k_);
}

double LiftedSymbol::mn_partial(double r1, double r2, int a1, int a2) const {
  return primitives_(n_ - 1 - a1, n_ - 1 - a2, r1, r2);
}

double transform_symbol(const BilinearSymbol& symbol, int n, double r1, double r2, int resolution, double r_min) {
  lift_k(n);
  if (!(r1 >= r_min) || !(r2 >= r_min) || !(r_min > 0.0)) throw DomainError("transform_symbol needs r >= r_min > 0");
  if (resolution < 4) throw DomainError("resolution must be >= 4");
  const LiftedSymbol lifted(symbol, n, Eigen::ArrayXd::LinSpaced(resolution, 0.0, r1),
                            Eigen::ArrayXd::LinSpaced(resolution, 0.0, r2));
  return lifted(r1, r2);
}

std::vector<double> LogGrid::nodes(bool extended) const {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw DomainError("log grid needs 0 < lo < hi");
  const double a = std::log10(lo) - (extended ? 1.0 : 0.0), b = std::log10(hi) + (extended ? 1.0 : 0.0);
  const int count = static_cast<int>(std::lround((b - a) * per_decade));
  std::vector<double> x;
  for (int i = 0; i <= count; ++i) x.push_back(std::pow(10.0, a + (b - a) * i / count));
  return x;
}

GridMax seminorm(const SymbolPartial& partial, int alpha, int beta, const LogGrid& grid) {
  if (alpha < 0 || beta < 0 || alpha > 2 || beta > 2) throw DomainError("seminorm orders are 0..2");
  return grid_max(
      [&](double x, double y) { return std::pow(x, alpha) * std::pow(y, beta) * partial(x, y, alpha, beta); }, grid);
}

PreservationReport preservation_report(const BilinearSymbol& symbol, int n, int max_order, const LogGrid& grid,
                                       const FdPolicy& policy) {
  if (!symbol.bi_even) throw DomainError("symbol '" + symbol.name + "' is not declared bi-even");
  require_bi_even(symbol);
  lift_k(n);
  if (max_order < 0 || max_order > 2) throw DomainError("max_order must be 0..2");

  PreservationReport rep;
  rep.symbol = symbol.name;
  rep.n = n;
  rep.max_order = max_order;
  rep.base.grid = rep.lifted.grid = grid;
  rep.base.policy = rep.lifted.policy = policy;
  rep.base.derivatives = symbol.partial ? "analytic" : "finite_difference";
  rep.lifted.derivatives = "primitive_tables";

  const SymbolPartial base = symbol_partial(symbol, policy);
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; b <= max_order; ++b) {
      const GridMax g = seminorm(base, a, b, grid);
      if (!std::isfinite(g.value)) throw DomainError("symbol seminorm is not finite on the grid");
      rep.base.entries[{a, b}] = g;
    }

  const std::vector<double> nodes = grid.nodes(true);
  const Eigen::ArrayXd g = graded_grid(nodes.back() * 1.01);
  const LiftedSymbol lifted(symbol, n, g, g, policy);
  const SymbolPartial lp = [&](double x, double y, int a, int b) { return lifted(x, y, a, b); };
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; b <= max_order; ++b) {
      rep.lifted.entries[{a, b}] = seminorm(lp, a, b, grid);
      rep.mn_bounds[{a, b}] = grid_max(
          [&](double x, double y) {
            return std::pow(x, a - (n - 1)) * std::pow(y, b - (n - 1)) * lifted.mn_partial(x, y, a, b);
          },
          grid);
    }

  rep.preserved = true;
  for (const auto& [key, e] : rep.base.entries) {
    const double l = rep.lifted.entries.at(key).value;
    double ratio;
    if (e.value > 1e-12)
      ratio = l / e.value;
    else
      ratio = l <= 1e-8 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.ratios[key] = ratio;
    if (!std::isfinite(ratio)) rep.preserved = false;
  }
  return rep;
}

}  // namespace mrft
