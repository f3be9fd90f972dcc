#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrft {

// Dimensions (n_1, ..., n_m) of a multiradial transform.
class DimensionSignature {
 public:
  static constexpr int kMaxAxes = 4;

  explicit DimensionSignature(std::vector<int> dims);
  // "3" or "3,1"
  static DimensionSignature parse(std::string_view text);

  int m() const { return static_cast<int>(dims_.size()); }
  int n(int axis) const { return dims_.at(axis); }
  bool odd(int axis) const { return dims_.at(axis) % 2 == 1; }
  // n = 2k+1 (odd) or 2k+2 (even)
  int k(int axis) const { return (dims_.at(axis) - 1) / 2; }
  bool all_odd() const;
  bool all_even() const;
  const std::vector<int>& dims() const { return dims_; }
  std::string str() const;

  friend bool operator==(const DimensionSignature&, const DimensionSignature&) = default;

 private:
  std::vector<int> dims_;
};

}  // namespace mrft
