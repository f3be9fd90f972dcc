#include <cmath>
#include <numbers>

#include "mrft/bessel.hpp"
#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"

namespace mrft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kScanStep = 0.5;
constexpr double kMaxReach = 200.0;

// K(i,q) = w_q J_0(2 pi x_i s_q) s_q
Eigen::MatrixXd hankel_matrix(const Eigen::ArrayXd& x, const NodeRule& rule) {
  const BesselOrder order = BesselOrder::from_twice(0);
  Eigen::MatrixXd K(x.size(), rule.nodes.size());
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q)
    for (Eigen::Index i = 0; i < x.size(); ++i)
      K(i, q) = rule.weights(q) * rule.nodes(q) * bessel_j(order, kTwoPi * x(i) * rule.nodes(q));
  return K;
}

// Radius beyond which the axis-slice transform U(phi) is negligible.
double transform_reach(const RadialProfile& profile, int axis, const QuadratureSpec& spec) {
  const RadialFunction g{[&](double s) {
                           double r[DimensionSignature::kMaxAxes] = {0.0, 0.0, 0.0, 0.0};
                           r[axis] = s;
                           return profile.phi(std::span<const double>(r, profile.m));
                         },
                         1.0, 0.0, profile.support[axis], profile.edge[axis]};
  QuadratureSpec s = spec;
  s.tol = std::max(spec.tol * 1e-3, 1e-14);
  const BesselOrder order = BesselOrder::from_twice(0);
  double window_max = 0.0;
  int quiet = 0;
  for (double rho = kScanStep; rho <= kMaxReach; rho += kScanStep) {
    const double u = std::abs(integrate_hankel(g, order, kTwoPi * rho, 1, s).value) * rho;
    window_max = std::max(window_max, u);
    if (u < 1e-3 * spec.tol) {
      if (++quiet >= 6) return rho;
    } else {
      quiet = 0;
    }
  }
  return INFINITY;
}

struct Rules {
  std::vector<NodeRule> inner, outer;
};

Rules build_rules(const RadialProfile& profile, const std::vector<double>& reach, double t_max, int points,
                  double scale) {
  Rules r;
  for (int j = 0; j < profile.m; ++j) {
    const double S = *profile.support[j];
    const double inner_panel = std::min(0.5, std::numbers::pi / (kTwoPi * reach[j])) * scale;
    const double outer_panel = std::min(0.25, std::numbers::pi / (kTwoPi * std::max(t_max, 1e-12))) * scale;
    r.inner.push_back(composite_rule(0.0, S, inner_panel, points, profile.edge[j]));
    r.outer.push_back(composite_rule(0.0, reach[j], outer_panel, points));
  }
  return r;
}

// U^2(phi) at the given points.
std::vector<double> apply_twice(const RadialProfile& profile, const Rules& rules,
                                const std::vector<std::vector<double>>& points) {
  std::vector<double> out;
  if (profile.m == 1) {
    const NodeRule& in = rules.inner[0];
    const NodeRule& mid = rules.outer[0];
    Eigen::VectorXd f(in.nodes.size());
    for (Eigen::Index q = 0; q < in.nodes.size(); ++q) {
      const double s = in.nodes(q);
      f(q) = profile.phi(std::span<const double>(&s, 1));
    }
    const Eigen::VectorXd u = hankel_matrix(mid.nodes, in) * f;
    Eigen::ArrayXd t(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) t(i) = points[i][0];
    const Eigen::VectorXd u2 = hankel_matrix(t, mid) * u;
    out.assign(u2.data(), u2.data() + u2.size());
    return out;
  }
  // m = 2: U = K0 Phi K1^T, then U^2 at each point.
  const NodeRule &in0 = rules.inner[0], &in1 = rules.inner[1];
  Eigen::MatrixXd phi(in0.nodes.size(), in1.nodes.size());
  for (Eigen::Index a = 0; a < phi.rows(); ++a)
    for (Eigen::Index b = 0; b < phi.cols(); ++b) {
      const double r[2] = {in0.nodes(a), in1.nodes(b)};
      phi(a, b) = profile.phi(r);
    }
  const Eigen::MatrixXd u =
      hankel_matrix(rules.outer[0].nodes, in0) * phi * hankel_matrix(rules.outer[1].nodes, in1).transpose();
  for (const auto& p : points) {
    const Eigen::ArrayXd t0 = Eigen::ArrayXd::Constant(1, p[0]), t1 = Eigen::ArrayXd::Constant(1, p[1]);
    const Eigen::MatrixXd v =
        hankel_matrix(t0, rules.outer[0]) * u * hankel_matrix(t1, rules.outer[1]).transpose();
    out.push_back(v(0, 0));
  }
  return out;
}

}  // namespace

InvolutionReport hankel_involution_residual(const RadialProfile& profile,
                                            const std::vector<std::vector<double>>& points,
                                            const QuadratureSpec& spec) {
  spec.validate();
  if (profile.m != 1 && profile.m != 2) throw CapabilityError("involution check covers m = 1 or 2");
  for (int j = 0; j < profile.m; ++j)
    if (!profile.support[j]) throw CapabilityError("involution check needs compactly supported profiles");
  double t_max = 0.0;
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != profile.m) throw DomainError("involution point has the wrong size");
    for (double t : p) {
      if (!(t >= 0.0)) throw DomainError("involution radii must be >= 0");
      t_max = std::max(t_max, t);
    }
  }

  InvolutionReport report;
  report.points = points;
  // per-axis constant raised to the number of axes
  const double c1 = std::pow(kTwoPi, -profile.m), c2 = std::pow(kTwoPi, -2 * profile.m);
  if (profile.m == 1)
    report.candidates = {{"1/(2pi)", c1, 0.0}, {"1/(2pi)^2", c2, 0.0}};
  else
    report.candidates = {{"1/(2pi)^2", c1, 0.0}, {"1/(2pi)^4", c2, 0.0}};

  std::vector<double> reach;
  for (int j = 0; j < profile.m; ++j) reach.push_back(transform_reach(profile, j, spec));
  for (double R : reach)
    if (!std::isfinite(R)) {
      report.excluded = static_cast<int>(points.size());
      return report;
    }

  std::vector<double> coarse, fine;
  double scale = 1.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    coarse = apply_twice(profile, build_rules(profile, reach, t_max, 10, scale), points);
    fine = apply_twice(profile, build_rules(profile, reach, t_max, 16, scale), points);
    double worst = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) worst = std::max(worst, std::abs(fine[i] - coarse[i]));
    if (worst <= spec.tol) break;
    scale *= 0.5;
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(std::abs(fine[i] - coarse[i]) <= 10.0 * spec.tol) || !std::isfinite(fine[i])) {
      ++report.excluded;
      continue;
    }
    const double phi = profile.phi(points[i]);
    report.u2.push_back(fine[i]);
    report.phi.push_back(phi);
    for (auto& c : report.candidates)
      c.sup_residual = std::max(c.sup_residual, std::abs(fine[i] - c.constant * phi));
  }
  report.winner = report.candidates[0].sup_residual <= report.candidates[1].sup_residual ? 0 : 1;
  return report;
}

}  // namespace mrft
