#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrft/profiles.hpp"
#include "mrft/quadrature.hpp"
#include "mrft/signature.hpp"

namespace mrft {

using Rational = boost::multiprecision::cpp_rational;

// c(k,l) = (-1)^l (2k-l-1)! / (2^{k-l} (k-l)! (l-1)!), 1 <= l <= k <= 20.
Rational coefficient(int k, int l);
double coefficient_value(int k, int l);
// "p" for integers, "p/2^q" otherwise.
std::string format_rational(const Rational& q);

struct CoefficientTable {
  int k_max = 0;
  std::vector<std::vector<Rational>> rows;  // rows[k-1][l-1]
  const Rational& at(int k, int l) const { return rows.at(k - 1).at(l - 1); }
};
CoefficientTable coefficient_table(int k_max);

enum class Method { direct, recursion, bandlimited, reference };
std::string method_name(Method m);

// Values over the tensor product of per-axis radius grids, first axis slowest.
struct SampledTransform {
  DimensionSignature signature{{1}};
  Method method = Method::direct;
  std::vector<Eigen::ArrayXd> radii;
  Eigen::ArrayXd values;
  Eigen::ArrayXd errors;
  Eigen::Array<bool, Eigen::Dynamic, 1> converged;

  Eigen::Index size() const { return values.size(); }
  std::vector<double> point(Eigen::Index flat) const;
  bool all_converged() const { return converged.all(); }
};

// F(phi)(r) = (2 pi)^{sum n_j/2} int phi(s) prod_j Jt_{n_j/2-1}(2 pi r_j s_j) s_j^{n_j-1} ds
SampledTransform direct_transform(const RadialProfile& profile, const DimensionSignature& sig,
                                  const std::vector<Eigen::ArrayXd>& radii, const QuadratureSpec& spec);

struct FdPolicy {
  double min_step = 1e-3;
  double rel_step = 1e-2;
  double r_min = 0.0;  // stencils may not reach below this
};

// Central differences (4th order) with one Richardson level; orders 0..4 per axis.
double fd_partial(const ScalarField& f, std::span<const int> order, std::span<const double> point,
                  const FdPolicy& policy = {});

// Mixed partials of a base transform (F_{1,..,1} or F_{2,..,2}).
class DerivativeProvider {
 public:
  enum class Source { analytic, finite_difference };
  static constexpr int kMaxFdOrder = 3;

  static DerivativeProvider analytic(int m, PartialField partial);
  static DerivativeProvider finite_difference(int m, ScalarField base, FdPolicy policy = {});

  double operator()(std::span<const double> point, std::span<const int> orders) const;
  int m() const { return m_; }
  Source source() const { return source_; }
  // Tolerance multiplier appropriate to the derivative source.
  double tolerance_factor() const { return source_ == Source::analytic ? 1.0 : 10.0; }

 private:
  DerivativeProvider() = default;
  int m_ = 1;
  Source source_ = Source::analytic;
  PartialField partial_;
};

// -(1/(2 pi r_axis)) dF/dr_axis: raises n_axis by two.
double raise_dimension(const ScalarField& dF, int axis, std::span<const double> point);

inline constexpr double kDefaultRMin = 1e-3;

double recursion_odd(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> point,
                     double r_min = kDefaultRMin);
double recursion_even(const DerivativeProvider& provider, std::span<const int> k, std::span<const double> point,
                      double r_min = kDefaultRMin);

// Even-dimension band-limited sums: `printed` integrates w^{-(2k-l)} phi^{(l+1)};
// `product_rule` integrates d/dw [w^{-(2k-l)} phi^{(l)}].
enum class EvenForm { printed, product_rule };
enum class Parity { odd, even };

double bandlimited_f2(const std::function<double(double)>& phi_hat_prime, double A, double r,
                      const QuadratureSpec& spec);
double bandlimited_odd_1d(const DerivativeProvider& provider, double A, int k, double r);
double bandlimited_even_1d(const DerivativeProvider& provider, double A, int k, double r, const QuadratureSpec& spec,
                           EvenForm form = EvenForm::printed);
double bandlimited_multiradial(const DerivativeProvider& provider, double A, std::span<const int> k, Parity parity,
                               std::span<const double> point, const QuadratureSpec& spec,
                               EvenForm form = EvenForm::printed);

// f with phi = U(f chi_[0,A]), U g(x) = int_0^A g(u) J_0(2 pi u x) u du.
double solve_abel_profile(const std::function<double(double)>& phi_hat_prime, double A, double r,
                          const QuadratureSpec& spec);
// Two-axis analogue from the mixed partial d^2 phi_hat / dw1 dw2.
double solve_abel_profile_2d(const std::function<double(double, double)>& mixed_partial, double A, double r1,
                             double r2, const QuadratureSpec& spec);

struct InvolutionCandidate {
  std::string label;
  double constant;
  double sup_residual;
};

struct InvolutionReport {
  std::vector<InvolutionCandidate> candidates;  // 1/(2 pi) and 1/(2 pi)^2
  int winner = -1;
  std::vector<std::vector<double>> points;
  std::vector<double> u2;   // U^2(phi) at points
  std::vector<double> phi;  // phi at points
  int excluded = 0;         // points dropped for non-convergence
};

InvolutionReport hankel_involution_residual(const RadialProfile& profile,
                                            const std::vector<std::vector<double>>& points,
                                            const QuadratureSpec& spec);

}  // namespace mrft
