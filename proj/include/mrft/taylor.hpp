#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

namespace mrft {

// Truncated Taylor expansion about a point: coefficient k is f^{(k)}(x0)/k!.
template <class Scalar>
class Jet {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet() : c_(Coeffs::Zero(1)) {}
  Jet(Scalar constant, int order) : c_(Coeffs::Zero(order + 1)) { c_(0) = constant; }
  explicit Jet(Coeffs c) : c_(std::move(c)) {}

  // The identity function expanded about x0.
  static Jet variable(Scalar x0, int order) {
    Jet j(x0, order);
    if (order > 0) j.c_(1) = Scalar(1);
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Scalar value() const { return c_(0); }
  const Coeffs& coeffs() const { return c_; }
  Scalar& operator[](int k) { return c_(k); }
  Scalar operator[](int k) const { return c_(k); }

  // k-th derivative at the expansion point.
  Scalar derivative(int k) const {
    Scalar f(1);
    for (int i = 2; i <= k; ++i) f *= Scalar(i);
    return c_(k) * f;
  }

  Jet& operator+=(const Jet& o) { c_ += o.c_; return *this; }
  Jet& operator-=(const Jet& o) { c_ -= o.c_; return *this; }
  Jet& operator*=(Scalar s) { c_ *= s; return *this; }
  Jet& operator+=(Scalar s) { c_(0) += s; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { a.c_ = -a.c_; return a; }
  friend Jet operator+(Jet a, Scalar s) { return a += s; }
  friend Jet operator+(Scalar s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, Scalar s) { return a += -s; }
  friend Jet operator-(Scalar s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, Scalar s) { return a *= s; }
  friend Jet operator*(Scalar s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, Scalar s) { return a *= Scalar(1) / s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = a.order();
    Coeffs out = Coeffs::Zero(n + 1);
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) out(k) += a.c_(j) * b.c_(k - j);
    return Jet(out);
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const int n = a.order();
    Coeffs out = Coeffs::Zero(n + 1);
    for (int k = 0; k <= n; ++k) {
      Scalar s = a.c_(k);
      for (int j = 1; j <= k; ++j) s -= b.c_(j) * out(k - j);
      out(k) = s / b.c_(0);
    }
    return Jet(out);
  }

  friend Jet operator/(Scalar s, const Jet& b) { return Jet(s, b.order()) / b; }

  // f(a) given f and its derivatives at a.value(): derivs[j] = f^{(j)}(a0).
  static Jet compose(const std::vector<Scalar>& derivs, const Jet& a) {
    const int n = a.order();
    Jet delta = a;
    delta.c_(0) = Scalar(0);
    Jet out(derivs[0], n);
    Jet power(Scalar(1), n);
    Scalar fact(1);
    for (int j = 1; j <= n; ++j) {
      power = power * delta;
      fact *= Scalar(j);
      out.c_ += (derivs[j] / fact) * power.c_;
    }
    return out;
  }

 private:
  Coeffs c_;
};

template <class Scalar>
Jet<Scalar> exp(const Jet<Scalar>& a) {
  using std::exp;
  std::vector<Scalar> d(a.order() + 1, exp(a.value()));
  return Jet<Scalar>::compose(d, a);
}

template <class Scalar>
Jet<Scalar> pow(const Jet<Scalar>& a, Scalar p) {
  using std::pow;
  std::vector<Scalar> d(a.order() + 1);
  Scalar coef(1);
  for (int j = 0; j <= a.order(); ++j) {
    d[j] = coef * pow(a.value(), p - Scalar(j));
    coef *= p - Scalar(j);
  }
  return Jet<Scalar>::compose(d, a);
}

template <class Scalar>
Jet<Scalar> sqrt(const Jet<Scalar>& a) {
  return pow(a, Scalar(0.5));
}

template <class Scalar>
Jet<Scalar> sin(const Jet<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(a.value()), c = cos(a.value());
  std::vector<Scalar> d(a.order() + 1);
  for (int j = 0; j <= a.order(); ++j) d[j] = (j % 4 == 0) ? s : (j % 4 == 1) ? c : (j % 4 == 2) ? -s : -c;
  return Jet<Scalar>::compose(d, a);
}

template <class Scalar>
Jet<Scalar> cos(const Jet<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(a.value()), c = cos(a.value());
  std::vector<Scalar> d(a.order() + 1);
  for (int j = 0; j <= a.order(); ++j) d[j] = (j % 4 == 0) ? c : (j % 4 == 1) ? -s : (j % 4 == 2) ? -c : s;
  return Jet<Scalar>::compose(d, a);
}

}  // namespace mrft
