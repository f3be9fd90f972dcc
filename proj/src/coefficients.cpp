#include <boost/multiprecision/cpp_int.hpp>

#include "mrft/errors.hpp"
#include "mrft/transforms.hpp"

namespace mrft {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Rational coefficient(int k, int l) {
  if (k < 1 || k > 20 || l < 1 || l > k)
    throw DomainError("coefficient needs 1 <= l <= k <= 20, got k=" + std::to_string(k) + " l=" + std::to_string(l));
  const cpp_int num = factorial(2 * k - l - 1);
  const cpp_int den = (cpp_int(1) << (k - l)) * factorial(k - l) * factorial(l - 1);
  Rational c(num, den);
  return l % 2 == 0 ? c : Rational(-c);
}

double coefficient_value(int k, int l) { return coefficient(k, l).convert_to<double>(); }

std::string format_rational(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  int shift = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++shift;
  }
  if (den != 1) return num.str() + "/" + cpp_int(den << shift).str();
  return num.str() + "/2^" + std::to_string(shift);
}

CoefficientTable coefficient_table(int k_max) {
  if (k_max < 1 || k_max > 20) throw DomainError("k_max must be in 1..20");
  CoefficientTable t;
  t.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<Rational> row;
    for (int l = 1; l <= k; ++l) row.push_back(coefficient(k, l));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::recursion: return "recursion";
    case Method::bandlimited: return "bandlimited";
    case Method::reference: return "reference";
  }
  return "unknown";
}

}  // namespace mrft
