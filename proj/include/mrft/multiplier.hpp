#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mrft/transforms.hpp"

namespace mrft {

// d^a/dxi^a d^b/deta^b m(xi, eta)
using SymbolPartial = std::function<double(double xi, double eta, int a, int b)>;

struct BilinearSymbol {
  std::string name;
  std::function<double(double, double)> m;
  bool bi_even = true;
  SymbolPartial partial;  // optional, orders up to 2 per axis

  double operator()(double xi, double eta) const { return m(xi, eta); }
};

// Throws DomainError if m is not even in each variable on a fixed set of test points.
void require_bi_even(const BilinearSymbol& symbol);

const BilinearSymbol& symbol_get(const std::string& name);
std::vector<std::string> symbol_names();

// Analytic partials when attached, central differences otherwise.
SymbolPartial symbol_partial(const BilinearSymbol& symbol, const FdPolicy& policy = {});

// Iterated primitives P^{f1,f2} m over a tensor grid, f-fold integral from 0 per axis.
// Negative f means |f| derivatives.
class SymbolPrimitives {
 public:
  SymbolPrimitives(const BilinearSymbol& symbol, Eigen::ArrayXd grid1, Eigen::ArrayXd grid2,
                   const FdPolicy& policy = {});

  // Local bicubic interpolation inside the grid hull.
  double operator()(int f1, int f2, double r1, double r2) const;

  const Eigen::ArrayXd& grid(int axis) const { return axis == 0 ? grid1_ : grid2_; }

 private:
  const Eigen::MatrixXd& table(int f1, int f2) const;

  SymbolPartial partial_;
  Eigen::ArrayXd grid1_, grid2_;
  mutable std::map<std::pair<int, int>, Eigen::MatrixXd> tables_;
};

// Grid on [0, reach]: uniform step h_min up to h_min/ratio, then geometric with the given ratio.
Eigen::ArrayXd graded_grid(double reach, double h_min = 2e-4, double ratio = 0.02);

// M^n(r1, r2): (n-1)-fold primitive in each coordinate, n in {3, 5}.
double primitive_Mn(const BilinearSymbol& symbol, int n, double r1, double r2, int resolution = 1025);

// Lifted symbol (n = 2k+1) with its partials up to order 2 per axis.
class LiftedSymbol {
 public:
  LiftedSymbol(const BilinearSymbol& symbol, int n, Eigen::ArrayXd grid1, Eigen::ArrayXd grid2,
               const FdPolicy& policy = {});

  double operator()(double r1, double r2, int d1 = 0, int d2 = 0) const;
  // d^a M^n, i.e. the (n-1-a)-fold primitive.
  double mn_partial(double r1, double r2, int a1, int a2) const;
  int n() const { return n_; }

 private:
  int n_, k_;
  SymbolPrimitives primitives_;
};

double transform_symbol(const BilinearSymbol& symbol, int n, double r1, double r2, int resolution = 1025,
                        double r_min = kDefaultRMin);

struct LogGrid {
  double lo = 1e-2;
  double hi = 1e2;
  int per_decade = 8;
  // One extra decade on each side decides whether the grid max has settled.
  double settle_tol = 1e-3;

  std::vector<double> nodes(bool extended) const;
};

struct GridMax {
  double value = 0.0;
  double xi = 0.0, eta = 0.0;
  bool converged = true;  // max unchanged on the extended grid
  int skipped = 0;        // points where the derivative stencil left the domain
};

// max over the grid of |xi|^alpha |eta|^beta |d^alpha d^beta m|
GridMax seminorm(const SymbolPartial& partial, int alpha, int beta, const LogGrid& grid = {});

struct SeminormReport {
  LogGrid grid;
  std::string derivatives;  // "analytic", "finite_difference" or "primitive_tables"
  FdPolicy policy;
  std::map<std::pair<int, int>, GridMax> entries;
};

struct PreservationReport {
  std::string symbol;
  int n = 3;
  int max_order = 1;
  SeminormReport base, lifted;
  // sup r1^{a1-(n-1)} r2^{a2-(n-1)} |d^a M^n|
  std::map<std::pair<int, int>, GridMax> mn_bounds;
  std::map<std::pair<int, int>, double> ratios;
  bool preserved = false;
};

PreservationReport preservation_report(const BilinearSymbol& symbol, int n, int max_order = 2,
                                       const LogGrid& grid = {}, const FdPolicy& policy = {});

}  // namespace mrft
