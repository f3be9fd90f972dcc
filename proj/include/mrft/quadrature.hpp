#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "mrft/bessel.hpp"

namespace mrft {

enum class Acceleration {
  none,           // plain truncation at the envelope radius
  euler,          // iterated averaging of lobe partial sums
  smooth_cutoff,  // erfc-windowed truncations with geometric growth
};

struct QuadratureSpec {
  double tol = 1e-10;             // absolute
  double rel_tol = 0.0;           // optional, relative to |value|
  int max_subdivisions = 200;
  std::optional<double> truncation_radius;  // empty means automatic
  int max_lobes = 200000;
  Acceleration acceleration = Acceleration::none;
  double max_evaluations = 4e9;  // tensor-grid integrand budget

  void validate() const;
  double target(double value) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int subdivisions = 0;
  int lobes = 0;
  double cutoff = 0.0;  // window scale X used by smooth_cutoff
};

using Integrand = std::function<double(double)>;

enum class Edge {
  regular,
  inverse_sqrt,  // g ~ (S - s)^{-1/2} at the end of its support
};

// g on [0, inf) with |g(s)| <= C (1+s)^{-p}; g == 0 beyond support when set.
struct RadialFunction {
  Integrand eval;
  double decay_constant = 1.0;
  double decay_exponent = 0.0;
  std::optional<double> support;
  Edge edge = Edge::regular;
};

IntegralResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec);

// int_0^inf g(s) Jt_nu(rho s) s^power ds, Jt_nu(t) = t^-nu J_nu(t).
IntegralResult integrate_hankel(const RadialFunction& g, BesselOrder order, double rho, int power,
                                const QuadratureSpec& spec);

// int_r^A g(w) dw / sqrt(w^2 - r^2), via w = sqrt(r^2 + u^2).
IntegralResult integrate_abel(const Integrand& g, double r, double A, const QuadratureSpec& spec);

// `times`-fold cumulative integral from grid(0) on the same grid.
Eigen::ArrayXd cumulative_primitive(const Eigen::ArrayXd& grid, const Eigen::ArrayXd& values, int times);

// Smooth truncation weight used by Acceleration::smooth_cutoff; x = s / X.
double cutoff_window(double x);
// The window vanishes (below 1e-17) beyond this multiple of X.
inline constexpr double kCutoffReach = 3.2;

// Composite Gauss-Legendre nodes/weights.
struct NodeRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

// Gauss-Legendre rule on [-1,1].
const NodeRule& gauss_legendre(int points);

// Panels of length <= max_panel on [a,b], `points` nodes each. With
// Edge::inverse_sqrt the last panel is mapped by s = b - h v^2.
NodeRule composite_rule(double a, double b, double max_panel, int points, Edge edge = Edge::regular);

}  // namespace mrft
