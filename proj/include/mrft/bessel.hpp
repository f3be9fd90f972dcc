#pragma once

#include <vector>

namespace mrft {

// Bessel order restricted to integers and half-integers in [-1/2, 25].
class BesselOrder {
 public:
  static constexpr int kMinTwice = -1;
  static constexpr int kMaxTwice = 50;

  static BesselOrder from_twice(int twice);
  static BesselOrder of(double nu);
  // Order n/2 - 1 for a dimension n >= 1.
  static BesselOrder for_dimension(int n);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  bool half_integer() const { return twice_ % 2 != 0; }

  friend bool operator==(BesselOrder a, BesselOrder b) { return a.twice_ == b.twice_; }

 private:
  explicit BesselOrder(int twice) : twice_(twice) {}
  int twice_;
};

double bessel_j(BesselOrder order, double t);

// t^-nu J_nu(t); finite at t = 0.
double bessel_j_tilde(BesselOrder order, double t);

// k-th positive zero of J_nu (k >= 1), within 1e-3 relative.
double bessel_zero_estimate(BesselOrder order, int index);

// J_n for any integer n (negative orders by reflection).
double bessel_j_int(int n, double t);

// d^k/dt^k J_n(t) for k = 0..max_order.
std::vector<double> bessel_j_int_derivatives(int n, double t, int max_order);

}  // namespace mrft
