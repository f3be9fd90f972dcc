#include "mrft/profiles.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "mrft/bessel.hpp"
#include "mrft/errors.hpp"
#include "mrft/taylor.hpp"

namespace mrft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFast = std::numeric_limits<double>::infinity();  // faster than any power
constexpr double kGaussianReach = 6.5;

using J = Jet<double>;

double j0(double x) { return bessel_j_int(0, x); }
J j0(const J& a) { return J::compose(bessel_j_int_derivatives(0, a.value(), a.order()), a); }

template <class S>
S gaussian_fn(const S& r) {
  using std::exp;
  return exp(-kPi * (r * r));
}

template <class S>
S bump_hat_spectrum(const S& w) {
  const S u = 1.0 - w * w;
  return u * u * u;
}

template <class S>
S bump_hat_f2_fn(const S& r) {
  using std::pow;
  return (16.0 / (5.0 * kPi)) * pow(1.0 - r * r, 2.5);
}

template <class S>
S example3_spectrum(const S& w) {
  using std::sqrt;
  return kPi * j0(kTwoPi * sqrt(1.0 - w * w));
}

// k-th derivative of a scalar template function.
template <class F>
double derivative_1d(F&& f, double x, int order) {
  if (order < 0) throw DomainError("negative derivative order");
  if (order == 0) return f(x);
  return f(J::variable(x, order)).derivative(order);
}

// Band-limited spectrum: zero (with all derivatives) on |w| >= A.
template <class F>
std::function<double(double, int)> banded(F f, double A) {
  return [f, A](double w, int order) { return std::abs(w) >= A ? 0.0 : derivative_1d(f, w, order); };
}

template <class F>
std::function<double(double, int)> entire(F f) {
  return [f](double w, int order) { return derivative_1d(f, w, order); };
}

ScalarField scalar_1d(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> r) { return f(r[0]); };
}

PartialField partial_1d(std::function<double(double, int)> f) {
  return [f = std::move(f)](std::span<const double> r, std::span<const int> o) { return f(r[0], o[0]); };
}

RadialProfile base_profile(std::string name) {
  RadialProfile p;
  p.name = std::move(name);
  p.m = 1;
  p.decay = {AxisDecay{1.0, kFast}};
  p.support = {std::nullopt};
  p.edge = {Edge::regular};
  return p;
}

RadialProfile gaussian_base() {
  RadialProfile p = base_profile("gaussian");
  p.phi = scalar_1d([](double r) { return gaussian_fn(r); });
  p.support = {kGaussianReach};
  p.phi_hat = partial_1d(entire([](auto x) { return gaussian_fn(x); }));
  p.f2 = p.phi_hat;
  return p;
}

RadialProfile bump_base() {
  RadialProfile p = base_profile("bump");
  p.phi = scalar_1d([](double r) { return r >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / ((1.0 - r) * (1.0 + r))); });
  p.support = {1.0};
  return p;
}

RadialProfile bump_hat_base() {
  RadialProfile p = base_profile("bump_hat");
  // int_{-1}^{1} (1-w^2)^3 cos(2 pi w t) dw = 6 sqrt(pi) 2^{7/2} Jt_{7/2}(2 pi t)
  const double scale = 6.0 * std::sqrt(kPi) * std::pow(2.0, 3.5);
  const BesselOrder order = BesselOrder::of(3.5);
  p.phi = scalar_1d([scale, order](double t) { return scale * bessel_j_tilde(order, kTwoPi * t); });
  p.decay = {AxisDecay{1.0, 4.0}};
  p.band_limit = 1.0;
  p.phi_hat = partial_1d(banded([](auto w) { return bump_hat_spectrum(w); }, 1.0));
  p.f2 = partial_1d(banded([](auto r) { return bump_hat_f2_fn(r); }, 1.0));
  return p;
}

RadialProfile example3_base() {
  RadialProfile p = base_profile("example3");
  p.phi = scalar_1d([](double t) {
    const double q = std::sqrt(1.0 + t * t);
    return std::sin(kTwoPi * q) / q;
  });
  p.decay = {AxisDecay{1.0, 1.0}};
  p.convergence = ConvergenceClass::conditional;
  p.band_limit = 1.0;
  p.phi_hat = partial_1d(banded([](auto w) { return example3_spectrum(w); }, 1.0));
  return p;
}

// sqrt(4 pi^2 - s^2) without cancellation near s = 2 pi
double edge_root(double s) { return std::sqrt((kTwoPi - s) * (kTwoPi + s)); }

RadialProfile example1_profile() {
  RadialProfile p;
  p.name = "example1";
  p.m = 2;
  p.phi = [](std::span<const double> r) {
    if (r[0] >= kTwoPi || r[1] >= kTwoPi) return 0.0;
    const double a = edge_root(r[0]);
    return std::cos(a * std::sqrt(kTwoPi * kTwoPi + r[1] * r[1])) / a;
  };
  p.decay = {AxisDecay{1.0, kFast}, AxisDecay{1.0, kFast}};
  p.support = {kTwoPi, kTwoPi};
  p.edge = {Edge::inverse_sqrt, Edge::regular};
  p.convergence = ConvergenceClass::conditional;
  return p;
}

RadialProfile example2_profile() {
  RadialProfile p = example1_profile();
  p.name = "example2";
  p.phi = [](std::span<const double> r) {
    if (r[0] >= kTwoPi || r[1] >= kTwoPi) return 0.0;
    const double a = edge_root(r[0]);
    return std::cosh(a * edge_root(r[1])) / a;
  };
  return p;
}

double sinc_kernel(double x) {
  const double k = 4.0 * kPi * kPi;
  if (std::abs(x) < 1e-8) return k * (1.0 - (k * x) * (k * x) / 6.0);
  return std::sin(k * x) / x;
}

double sgn(double t) { return (t > 0.0) - (t < 0.0); }

QuadratureSpec reference_spec() {
  QuadratureSpec s;
  s.tol = 1e-13;
  s.rel_tol = 1e-11;
  s.max_subdivisions = 2000;
  return s;
}

void expect_point(const DimensionSignature& sig, std::span<const double> point) {
  if (static_cast<int>(point.size()) != sig.m()) throw DomainError("point size does not match signature");
  for (double r : point)
    if (!(r >= 0.0)) throw DomainError("radii must be >= 0");
}

[[noreturn]] void no_reference(std::string_view name, const DimensionSignature& sig) {
  throw CapabilityError("no reference transform for " + std::string(name) + " with dims " + sig.str());
}

double bump_hat_closed_form(int n, double r) {
  if (r >= 1.0) return 0.0;
  const double u = 1.0 - r * r;
  switch (n) {
    case 1: return u * u * u;
    case 2: return 16.0 / (5.0 * kPi) * std::pow(u, 2.5);
    case 3: return 3.0 / kPi * u * u;
    case 4: return 8.0 / (kPi * kPi) * std::pow(u, 1.5);
    case 5: return 6.0 / (kPi * kPi) * u;
    case 6: return 12.0 / (kPi * kPi * kPi) * std::sqrt(u);
    default: throw CapabilityError("bump_hat closed forms cover n <= 6");
  }
}

}  // namespace

bool RadialProfile::supports_recursion(const DimensionSignature& sig) const {
  if (sig.m() != m) return false;
  if (convergence == ConvergenceClass::conditional) return false;
  for (int j = 0; j < m; ++j)
    if (!(decay[j].p > 2.0 * sig.k(j) + 2.0)) return false;
  return true;
}

RadialProfile product_profile(const RadialProfile& base, int m) {
  if (base.m != 1) throw DomainError("product_profile needs a one-axis base");
  if (m < 1 || m > DimensionSignature::kMaxAxes) throw DomainError("product_profile: m must be in 1..4");
  if (m == 1) return base;
  RadialProfile p;
  p.name = base.name;
  p.m = m;
  p.phi = [f = base.phi, m](std::span<const double> r) {
    double v = 1.0;
    for (int j = 0; j < m && v != 0.0; ++j) v *= f(r.subspan(j, 1));
    return v;
  };
  auto lift = [m](const PartialField& f) -> PartialField {
    if (!f) return {};
    return [f, m](std::span<const double> r, std::span<const int> o) {
      double v = 1.0;
      for (int j = 0; j < m && v != 0.0; ++j) v *= f(r.subspan(j, 1), o.subspan(j, 1));
      return v;
    };
  };
  p.phi_hat = lift(base.phi_hat);
  p.f2 = lift(base.f2);
  p.decay.assign(m, base.decay[0]);
  p.support.assign(m, base.support[0]);
  p.edge.assign(m, base.edge[0]);
  p.convergence = base.convergence;
  p.band_limit = base.band_limit;
  return p;
}

std::vector<std::string> catalog_names() {
  return {"gaussian", "bump", "bump_hat", "example1", "example2", "example3"};
}

RadialProfile catalog_get(std::string_view name, int m) {
  if (m < 0 || m > DimensionSignature::kMaxAxes) throw DomainError("m must be in 1..4");
  const int axes = m == 0 ? 1 : m;
  if (name == "gaussian") return product_profile(gaussian_base(), axes);
  if (name == "bump") return product_profile(bump_base(), axes);
  if (name == "bump_hat") return product_profile(bump_hat_base(), axes);
  if (name == "example3") return product_profile(example3_base(), axes);
  if (name == "example1" || name == "example2") {
    if (m != 0 && m != 2) throw DomainError(std::string(name) + " has exactly two axes");
    return name == "example1" ? example1_profile() : example2_profile();
  }
  throw LookupError("unknown profile '" + std::string(name) + "'");
}

double bessel_j0_imaginary(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

IntegralResult convolve_1d(const CompactFunction& f, const Integrand& g, double x, const QuadratureSpec& spec) {
  if (!(f.hi > f.lo)) throw CapabilityError("convolve_1d needs a compactly supported first factor");
  const double mid = 0.5 * (f.lo + f.hi), h = mid - f.lo;
  const Integrand prod = [&](double t) { return f.eval(t) * g(x - t); };
  QuadratureSpec half = spec;
  half.tol = std::max(0.5 * spec.tol, 1e-14);
  IntegralResult left, right;
  if (f.lo_edge == Edge::inverse_sqrt)
    left = integrate_adaptive([&](double v) { return 2.0 * h * v * prod(f.lo + h * v * v); }, 0.0, 1.0, half);
  else
    left = integrate_adaptive(prod, f.lo, mid, half);
  if (f.hi_edge == Edge::inverse_sqrt)
    right = integrate_adaptive([&](double v) { return 2.0 * h * v * prod(f.hi - h * v * v); }, 0.0, 1.0, half);
  else
    right = integrate_adaptive(prod, mid, f.hi, half);
  IntegralResult out;
  out.value = left.value + right.value;
  out.error_estimate = left.error_estimate + right.error_estimate;
  out.converged = left.converged && right.converged;
  out.subdivisions = left.subdivisions + right.subdivisions;
  return out;
}

ReferenceEvaluation reference_value(std::string_view name, const DimensionSignature& sig,
                                    std::span<const double> point) {
  expect_point(sig, point);
  if (name == "gaussian") {
    double s = 0.0;
    for (double r : point) s += r * r;
    return {Provenance::closed_form, {{"exact", std::exp(-kPi * s)}}};
  }
  if (name == "bump_hat") {
    double v = 1.0;
    for (int j = 0; j < sig.m(); ++j) {
      if (sig.n(j) > 6) no_reference(name, sig);
      v *= bump_hat_closed_form(sig.n(j), point[j]);
    }
    return {Provenance::closed_form, {{"exact", v}}};
  }
  if (name == "example3" && sig.m() == 1) {
    const double r = point[0];
    const double b = r < 1.0 ? kTwoPi * std::sqrt((1.0 - r) * (1.0 + r)) : 0.0;
    switch (sig.n(0)) {
      case 1:
        return {Provenance::closed_form, {{"spectrum", r < 1.0 ? kPi * j0(b) : 0.0}}};
      case 2:
        if (r >= 1.0) return {Provenance::closed_form, {{"cos_form", 0.0}, {"one_minus_cos_form", 0.0}}};
        return {Provenance::closed_form,
                {{"cos_form", std::cos(b) / b}, {"one_minus_cos_form", (1.0 - std::cos(b)) / b}}};
      case 3:
        if (r >= 1.0) return {Provenance::closed_form, {{"chain_rule", 0.0}}};
        return {Provenance::closed_form,
                {{"chain_rule", -kPi * bessel_j_int(1, b) / std::sqrt((1.0 - r) * (1.0 + r))}}};
      default:
        no_reference(name, sig);
    }
  }
  const QuadratureSpec spec = reference_spec();
  if (name == "example1" && sig.m() == 2) {
    const double r1 = point[0], r2 = point[1];
    const double c = 4.0 * kPi * kPi * std::sqrt(1.0 + r1 * r1);
    if (sig.dims() == std::vector<int>{1, 1}) {
      CompactFunction f{[c](double t) {
                          const double q = std::sqrt((1.0 - t) * (1.0 + t));
                          return std::cos(c * q) / q;
                        },
                        -1.0, 1.0, Edge::inverse_sqrt, Edge::inverse_sqrt};
      return {Provenance::convolution, {{"convolution", convolve_1d(f, sinc_kernel, r2, spec).value}}};
    }
    if (sig.dims() == std::vector<int>{3, 3}) {
      CompactFunction f{[c](double t) {
                          const double q = std::sqrt((1.0 - t) * (1.0 + t));
                          return 4.0 * kPi * kPi * std::cos(c * q) / q * sgn(t);
                        },
                        -1.0, 1.0, Edge::inverse_sqrt, Edge::inverse_sqrt};
      return {Provenance::convolution, {{"convolution", convolve_1d(f, sinc_kernel, r2, spec).value}}};
    }
    no_reference(name, sig);
  }
  if (name == "example2" && sig.m() == 2) {
    const double r1 = point[0], r2 = point[1];
    const double k = 4.0 * kPi * kPi;
    if (sig.dims() == std::vector<int>{2, 1}) {
      const double a = std::sqrt(std::abs((r1 - 1.0) * (r1 + 1.0)));
      const bool real_branch = r1 >= 1.0;
      CompactFunction f{[=](double t) {
                          const double z = k * a * std::sqrt((1.0 - t) * (1.0 + t));
                          return real_branch ? j0(z) : bessel_j0_imaginary(z);
                        },
                        -1.0, 1.0};
      const double v = 2.0 * kPi * kPi * convolve_1d(f, sinc_kernel, r2, spec).value;
      return {Provenance::convolution, {{"convolution", v}}};
    }
    if (sig.dims() == std::vector<int>{4, 3}) {
      if (!(r1 > 1.0)) throw CapabilityError("the (4,3) reference display is real only for r1 > 1");
      const double a = std::sqrt((r1 - 1.0) * (r1 + 1.0));
      CompactFunction f{[=](double t) {
                          const double q = std::sqrt((1.0 - t) * (1.0 + t));
                          const double z = k * a * q;
                          const double v = (q > 0.0 ? k * bessel_j_int(1, z) / (a * q) : 0.5 * k * k) -
                                           2.0 * k * kPi * kPi * a * bessel_j_int(2, z);
                          return v * sgn(t);
                        },
                        -1.0, 1.0};
      return {Provenance::convolution, {{"convolution", convolve_1d(f, sinc_kernel, r2, spec).value}}};
    }
    no_reference(name, sig);
  }
  if (name == "bump" || name == "example3" || name == "example1" || name == "example2") no_reference(name, sig);
  throw LookupError("unknown profile '" + std::string(name) + "'");
}

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(where + "/" + key, "missing field");
  return *it;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(where, "expected a finite number");
  return x;
}

// Local cubic Lagrange weights for x inside grid.
void stencil(const std::vector<double>& grid, double x, int& first, double w[4], int& count) {
  const int n = static_cast<int>(grid.size());
  count = std::min(4, n);
  int i = static_cast<int>(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  first = std::clamp(i - 1, 0, n - count);
  for (int j = 0; j < count; ++j) {
    double l = 1.0;
    for (int k = 0; k < count; ++k)
      if (k != j) l *= (x - grid[first + k]) / (grid[first + j] - grid[first + k]);
    w[j] = l;
  }
}

struct SampledTable {
  std::vector<std::vector<double>> grids;
  std::vector<double> values;
  std::vector<AxisDecay> decay;

  double operator()(std::span<const double> r) const {
    const int m = static_cast<int>(grids.size());
    double factor = 1.0;
    int first[4], count[4];
    double w[4][4];
    for (int j = 0; j < m; ++j) {
      const double last = grids[j].back();
      double x = r[j];
      if (x > last) {
        factor *= std::pow((1.0 + last) / (1.0 + x), decay[j].p);
        x = last;
      }
      x = std::max(x, grids[j].front());
      stencil(grids[j], x, first[j], w[j], count[j]);
    }
    // Sum over the tensor stencil; first axis slowest in `values`.
    double total = 0.0;
    int idx[4] = {0, 0, 0, 0};
    for (;;) {
      double weight = 1.0;
      std::size_t flat = 0;
      for (int j = 0; j < m; ++j) {
        weight *= w[j][idx[j]];
        flat = flat * grids[j].size() + (first[j] + idx[j]);
      }
      total += weight * values[flat];
      int j = m - 1;
      while (j >= 0 && ++idx[j] == count[j]) idx[j--] = 0;
      if (j < 0) break;
    }
    return factor * total;
  }
};

}  // namespace

RadialProfile load_sampled_profile(std::string_view json_text, std::string name) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw FormatError("", std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("", "expected an object");
  const json& mj = require(doc, "m", "");
  if (!mj.is_number_integer() || mj.get<int>() < 1 || mj.get<int>() > DimensionSignature::kMaxAxes)
    throw FormatError("/m", "expected an integer in 1..4");
  const int m = mj.get<int>();

  auto table = std::make_shared<SampledTable>();
  const json& grids = require(doc, "grids", "");
  if (!grids.is_array() || static_cast<int>(grids.size()) != m)
    throw FormatError("/grids", "expected " + std::to_string(m) + " axis grids");
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) {
    const std::string where = "/grids/" + std::to_string(j);
    const json& g = grids[j];
    if (!g.is_array() || g.size() < 2) throw FormatError(where, "expected at least two grid points");
    std::vector<double> axis;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = number_at(g[i], where + "/" + std::to_string(i));
      if (i == 0 && (x < 0.0 || x > 1e-3)) throw FormatError(where + "/0", "grid must start in [0, 1e-3]");
      if (i > 0 && !(x > axis.back())) throw FormatError(where + "/" + std::to_string(i), "grid not strictly increasing");
      axis.push_back(x);
    }
    total *= axis.size();
    table->grids.push_back(std::move(axis));
  }
  const json& values = require(doc, "values", "");
  if (!values.is_array()) throw FormatError("/values", "expected an array");
  if (values.size() != total)
    throw FormatError("/values", "expected " + std::to_string(total) + " values, found " + std::to_string(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    table->values.push_back(number_at(values[i], "/values/" + std::to_string(i)));

  auto it = doc.find("decay");
  if (it == doc.end()) throw FormatError("/decay", "missing decay metadata");
  if (!it->is_array() || static_cast<int>(it->size()) != m)
    throw FormatError("/decay", "expected one {C,p} entry per axis");
  for (int j = 0; j < m; ++j) {
    const std::string where = "/decay/" + std::to_string(j);
    const json& d = (*it)[j];
    if (!d.is_object()) throw FormatError(where, "expected an object");
    const double C = number_at(require(d, "C", where), where + "/C");
    const double p = number_at(require(d, "p", where), where + "/p");
    if (!(C > 0.0)) throw FormatError(where + "/C", "must be positive");
    if (!(p >= 0.0)) throw FormatError(where + "/p", "must be >= 0");
    table->decay.push_back({C, p});
  }

  RadialProfile p;
  p.name = std::move(name);
  p.m = m;
  p.decay = table->decay;
  p.support.assign(m, std::nullopt);
  p.edge.assign(m, Edge::regular);
  p.phi = [table](std::span<const double> r) { return (*table)(r); };
  if (auto bl = doc.find("band_limit"); bl != doc.end() && !bl->is_null()) {
    const double A = number_at(*bl, "/band_limit");
    if (!(A > 0.0)) throw FormatError("/band_limit", "must be positive");
    p.band_limit = A;
  }
  return p;
}

RadialProfile load_sampled_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_sampled_profile(ss.str(), path);
}

}  // namespace mrft
