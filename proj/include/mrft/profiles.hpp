#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrft/quadrature.hpp"
#include "mrft/signature.hpp"

namespace mrft {

using ScalarField = std::function<double(std::span<const double>)>;
// Mixed partial derivative of a field: (point, per-axis orders) -> value.
using PartialField = std::function<double(std::span<const double>, std::span<const int>)>;

enum class ConvergenceClass { absolute, conditional };

// |phi| <= prod_j C_j (1 + r_j)^{-p_j}
struct AxisDecay {
  double C = 1.0;
  double p = 0.0;
};

struct RadialProfile {
  std::string name;
  int m = 1;
  ScalarField phi;
  std::vector<AxisDecay> decay;
  // phi vanishes (numerically) beyond support[j] on axis j.
  std::vector<std::optional<double>> support;
  std::vector<Edge> edge;
  ConvergenceClass convergence = ConvergenceClass::absolute;
  std::optional<double> band_limit;
  PartialField phi_hat;  // partials of F_{1,...,1}
  PartialField f2;       // partials of F_{2,...,2}

  double operator()(std::span<const double> r) const { return phi(r); }
  // Checks the decay requirement p_j > 2 k_j + 2 of the recursion routes.
  bool supports_recursion(const DimensionSignature& sig) const;
};

// Names: gaussian, bump, bump_hat, example1, example2, example3.
// m = 0 selects the natural number of axes; separable entries accept m in 1..4.
RadialProfile catalog_get(std::string_view name, int m = 0);
std::vector<std::string> catalog_names();

// phi(r_1,...,r_m) = prod_j base(r_j) for a one-axis base profile.
RadialProfile product_profile(const RadialProfile& base, int m);

enum class Provenance { closed_form, convolution, regularized_direct };

struct ReferenceCandidate {
  std::string label;
  double value;
};

struct ReferenceEvaluation {
  Provenance provenance;
  std::vector<ReferenceCandidate> candidates;
};

ReferenceEvaluation reference_value(std::string_view name, const DimensionSignature& sig,
                                    std::span<const double> point);

// A function supported on [lo, hi], optionally with inverse-sqrt ends.
struct CompactFunction {
  Integrand eval;
  double lo;
  double hi;
  Edge lo_edge = Edge::regular;
  Edge hi_edge = Edge::regular;
};

// (f * g)(x) = int f(t) g(x - t) dt over the support of f.
IntegralResult convolve_1d(const CompactFunction& f, const Integrand& g, double x, const QuadratureSpec& spec);

// Parses the sampled-profile JSON document (see README).
RadialProfile load_sampled_profile(std::string_view json_text, std::string name = "sampled");
RadialProfile load_sampled_profile_file(const std::string& path);

// J_0(i x) as the even series sum (x/2)^{2k} / (k!)^2.
double bessel_j0_imaginary(double x);

}  // namespace mrft
