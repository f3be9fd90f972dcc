#include <cmath>
#include <numbers>

#include "mrft/bessel.hpp"
#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"

namespace mrft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTinyRho = 1e-300;
constexpr int kCoarsePoints = 10;
constexpr int kFinePoints = 16;

double prefactor(int n) { return std::pow(kTwoPi, 0.5 * n); }

void validate_grid(const std::vector<Eigen::ArrayXd>& radii, int m) {
  if (static_cast<int>(radii.size()) != m) throw DomainError("one radius grid per axis is required");
  for (const auto& g : radii) {
    if (g.size() == 0) throw DomainError("radius grids must be non-empty");
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (!(g(i) >= 0.0) || !std::isfinite(g(i))) throw DomainError("radii must be finite and >= 0");
      if (i > 0 && !(g(i) > g(i - 1))) throw DomainError("radii must be strictly increasing");
    }
  }
}

// phi restricted to one axis, other coordinates at 0.
Integrand axis_slice(const RadialProfile& profile, int axis) {
  return [&profile, axis](double s) {
    double r[DimensionSignature::kMaxAxes] = {0.0, 0.0, 0.0, 0.0};
    r[axis] = s;
    return profile.phi(std::span<const double>(r, profile.m));
  };
}

QuadratureSpec tail_spec(const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  if (s.acceleration == Acceleration::none && !s.truncation_radius) s.acceleration = Acceleration::smooth_cutoff;
  return s;
}

// Per-axis cutoff calibration for non-compact axes.
struct Calibration {
  Eigen::ArrayXd cutoff, error;
  Eigen::Array<bool, Eigen::Dynamic, 1> ok;
};

Calibration calibrate(const RadialProfile& profile, int axis, int n, const Eigen::ArrayXd& radii,
                      const QuadratureSpec& spec) {
  Calibration c{Eigen::ArrayXd::Zero(radii.size()), Eigen::ArrayXd::Zero(radii.size()),
                Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(radii.size(), true)};
  if (profile.support[axis]) return c;
  const RadialFunction g{axis_slice(profile, axis), profile.decay[axis].C, profile.decay[axis].p, std::nullopt,
                         Edge::regular};
  QuadratureSpec s = tail_spec(spec);
  s.acceleration = Acceleration::smooth_cutoff;
  s.truncation_radius.reset();
  const BesselOrder order = BesselOrder::for_dimension(n);
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    try {
      const IntegralResult r = integrate_hankel(g, order, std::max(kTwoPi * radii(i), kTinyRho), n - 1, s);
      c.cutoff(i) = r.cutoff;
      c.error(i) = r.error_estimate * prefactor(n);
      c.ok(i) = r.converged && r.cutoff > 0.0;
    } catch (const EvaluationError&) {
      c.ok(i) = false;
    }
    if (!c.ok(i)) c.cutoff(i) = 0.0;
  }
  return c;
}

struct AxisPlan {
  NodeRule rule;
  Eigen::MatrixXd H;  // radii x nodes
};

AxisPlan plan_axis(const RadialProfile& profile, int axis, int n, const Eigen::ArrayXd& radii, const Calibration& cal,
                   int points, double panel_scale) {
  const BesselOrder order = BesselOrder::for_dimension(n);
  const double rho_max = kTwoPi * radii.maxCoeff();
  const double max_panel = std::min(0.5, std::numbers::pi / std::max(rho_max, 1e-12)) * panel_scale;
  AxisPlan plan;
  const bool compact = profile.support[axis].has_value();
  if (compact) {
    plan.rule = composite_rule(0.0, *profile.support[axis], max_panel, points, profile.edge[axis]);
  } else {
    const double xmax = std::max(cal.cutoff.maxCoeff(), 1.0);
    plan.rule = composite_rule(0.0, kCutoffReach * xmax, max_panel, points);
  }
  const Eigen::Index nq = plan.rule.nodes.size();
  plan.H.resize(radii.size(), nq);
  const double pref = prefactor(n);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const double s = plan.rule.nodes(q);
    const double base = pref * plan.rule.weights(q) * std::pow(s, n - 1);
    for (Eigen::Index i = 0; i < radii.size(); ++i) {
      double w = base * bessel_j_tilde(order, kTwoPi * radii(i) * s);
      if (!compact) w = cal.ok(i) ? w * cutoff_window(s / cal.cutoff(i)) : 0.0;
      plan.H(i, q) = w;
    }
  }
  return plan;
}

// Contracts phi over axes [0, d) with coordinates d..m-1 fixed in `coords`.
Eigen::VectorXd contract(int d, double* coords, const std::vector<AxisPlan>& plans, const RadialProfile& profile) {
  const AxisPlan& p = plans[d - 1];
  const Eigen::Index nq = p.rule.nodes.size();
  if (d == 1) {
    Eigen::VectorXd f(nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
      coords[0] = p.rule.nodes(q);
      const double v = profile.phi(std::span<const double>(coords, profile.m));
      if (!std::isfinite(v)) throw EvaluationError(coords[0], "non-finite profile value");
      f(q) = v;
    }
    return p.H * f;
  }
  Eigen::Index inner = 1;
  for (int j = 0; j < d - 1; ++j) inner *= plans[j].H.rows();
  Eigen::MatrixXd sub(inner, nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    coords[d - 1] = p.rule.nodes(q);
    sub.col(q) = contract(d - 1, coords, plans, profile);
  }
  Eigen::MatrixXd out = p.H * sub.transpose();  // (n_{d-1} x inner), flat index i + n_{d-1} a
  return Eigen::Map<Eigen::VectorXd>(out.data(), out.size());
}

Eigen::ArrayXd tensor_values(const RadialProfile& profile, const DimensionSignature& sig,
                             const std::vector<Eigen::ArrayXd>& radii, const std::vector<Calibration>& cals,
                             int points, double panel_scale, const QuadratureSpec& spec) {
  std::vector<AxisPlan> plans;
  double evaluations = 1.0;
  for (int j = 0; j < sig.m(); ++j) {
    plans.push_back(plan_axis(profile, j, sig.n(j), radii[j], cals[j], points, panel_scale));
    evaluations *= static_cast<double>(plans.back().rule.nodes.size());
  }
  if (evaluations > spec.max_evaluations)
    throw BudgetError("direct transform needs " + std::to_string(evaluations) + " integrand evaluations, budget " +
                      std::to_string(spec.max_evaluations));
  double coords[DimensionSignature::kMaxAxes] = {0.0, 0.0, 0.0, 0.0};
  // contract() orders the result with the first axis slowest.
  return contract(sig.m(), coords, plans, profile).array();
}

SampledTransform direct_1d(const RadialProfile& profile, const DimensionSignature& sig, const Eigen::ArrayXd& radii,
                           const QuadratureSpec& spec) {
  SampledTransform out;
  out.signature = sig;
  out.method = Method::direct;
  out.radii = {radii};
  const Eigen::Index n_r = radii.size();
  out.values.resize(n_r);
  out.errors.resize(n_r);
  out.converged.resize(n_r);
  const int n = sig.n(0);
  const double pref = prefactor(n);
  const BesselOrder order = BesselOrder::for_dimension(n);
  const RadialFunction g{axis_slice(profile, 0), profile.decay[0].C, profile.decay[0].p, profile.support[0],
                         profile.edge[0]};
  QuadratureSpec s = tail_spec(spec);
  s.tol = std::max(spec.tol / pref, 1e-14);
  for (Eigen::Index i = 0; i < n_r; ++i) {
    try {
      const IntegralResult r = integrate_hankel(g, order, std::max(kTwoPi * radii(i), kTinyRho), n - 1, s);
      out.values(i) = pref * r.value;
      out.errors(i) = pref * r.error_estimate;
      out.converged(i) = r.converged;
    } catch (const EvaluationError&) {
      out.values(i) = NAN;
      out.errors(i) = INFINITY;
      out.converged(i) = false;
    }
  }
  return out;
}

}  // namespace

std::vector<double> SampledTransform::point(Eigen::Index flat) const {
  std::vector<double> p(radii.size());
  for (int j = static_cast<int>(radii.size()) - 1; j >= 0; --j) {
    const Eigen::Index n = radii[j].size();
    p[j] = radii[j](flat % n);
    flat /= n;
  }
  return p;
}

SampledTransform direct_transform(const RadialProfile& profile, const DimensionSignature& sig,
                                  const std::vector<Eigen::ArrayXd>& radii, const QuadratureSpec& spec) {
  spec.validate();
  if (profile.m != sig.m()) throw DomainError("profile axes do not match the signature");
  validate_grid(radii, sig.m());
  for (int j = 0; j < sig.m(); ++j) BesselOrder::for_dimension(sig.n(j));
  if (sig.m() == 1) return direct_1d(profile, sig, radii[0], spec);

  std::vector<Calibration> cals;
  for (int j = 0; j < sig.m(); ++j) cals.push_back(calibrate(profile, j, sig.n(j), radii[j], spec));

  SampledTransform out;
  out.signature = sig;
  out.method = Method::direct;
  out.radii = radii;
  Eigen::Index total = 1;
  for (const auto& g : radii) total *= g.size();

  Eigen::Array<bool, Eigen::Dynamic, 1> cal_ok = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(total, true);
  Eigen::ArrayXd cal_err = Eigen::ArrayXd::Zero(total);
  for (Eigen::Index f = 0; f < total; ++f) {
    Eigen::Index rest = f;
    for (int j = sig.m() - 1; j >= 0; --j) {
      const Eigen::Index n = radii[j].size();
      const Eigen::Index i = rest % n;
      rest /= n;
      cal_ok(f) = cal_ok(f) && cals[j].ok(i);
      cal_err(f) += cals[j].error(i);
    }
  }

  double panel_scale = 1.0;
  for (int attempt = 0;; ++attempt) {
    Eigen::ArrayXd coarse, fine;
    try {
      coarse = tensor_values(profile, sig, radii, cals, kCoarsePoints, panel_scale, spec);
      fine = tensor_values(profile, sig, radii, cals, kFinePoints, panel_scale, spec);
    } catch (const EvaluationError&) {
      out.values = Eigen::ArrayXd::Constant(total, NAN);
      out.errors = Eigen::ArrayXd::Constant(total, INFINITY);
      out.converged = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(total, false);
      return out;
    }
    out.values = fine;
    out.errors = (fine - coarse).abs() + cal_err;
    out.converged.resize(total);
    for (Eigen::Index f = 0; f < total; ++f)
      out.converged(f) = cal_ok(f) && std::isfinite(fine(f)) && out.errors(f) <= spec.target(fine(f));
    if (out.converged.all() || attempt == 2) break;
    panel_scale *= 0.5;
  }
  for (Eigen::Index f = 0; f < total; ++f)
    if (!cal_ok(f)) out.values(f) = NAN;
  return out;
}

}  // namespace mrft
