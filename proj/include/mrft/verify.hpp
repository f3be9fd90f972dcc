#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mrft/transforms.hpp"

namespace mrft {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // residual or measured constant
  double tolerance = 0.0;
  std::string detail;      // selected constants, flagged discrepancies
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  double tol = 1e-11;  // quadrature tolerance for transforms
};

std::vector<std::string> suite_names();  // excludes "all"
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options = {});

// Exact expansion of (-(d/dr)/r)^k phi: coefficient of r^{-j} phi^{(l)}, keyed (j, l).
// The 1/(2 pi)^k factor is left out.
std::map<std::pair<int, int>, Rational> raising_expansion(int k);

}  // namespace mrft
