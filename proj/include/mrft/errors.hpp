#pragma once

#include <stdexcept>
#include <string>

namespace mrft {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Route cannot serve the request (wrong parity, missing band limit, ...).
struct CapabilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input document; `where` is a JSON pointer.
struct FormatError : std::runtime_error {
  FormatError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), pointer(std::move(where)) {}
  std::string pointer;
};

struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Work estimate exceeds the configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrand produced a non-finite value.
struct EvaluationError : std::runtime_error {
  EvaluationError(double x, const std::string& what)
      : std::runtime_error(what + " at x=" + std::to_string(x)), abscissa(x) {}
  double abscissa;
};

}  // namespace mrft
