#include "mrft/signature.hpp"

#include <algorithm>
#include <charconv>

#include "mrft/errors.hpp"

namespace mrft {

DimensionSignature::DimensionSignature(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || m() > kMaxAxes) throw DomainError("signature needs 1..4 axes");
  for (int n : dims_)
    if (n < 1) throw DomainError("signature dimensions must be >= 1");
}

DimensionSignature DimensionSignature::parse(std::string_view text) {
  std::vector<int> dims;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw DomainError("invalid dimension list '" + std::string(text) + "'");
    dims.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return DimensionSignature(std::move(dims));
}

bool DimensionSignature::all_odd() const {
  return std::all_of(dims_.begin(), dims_.end(), [](int n) { return n % 2 == 1; });
}

bool DimensionSignature::all_even() const {
  return std::all_of(dims_.begin(), dims_.end(), [](int n) { return n % 2 == 0; });
}

std::string DimensionSignature::str() const {
  std::string out;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(dims_[i]);
  }
  return out;
}

}  // namespace mrft
