#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "unicr/errors.hpp"

namespace unicr {

/// Sorted Monte Carlo sample of a scalar statistic (here: log likelihood
/// ratios) with quantile and CDF queries.
class EmpiricalCdf {
 public:
  EmpiricalCdf(std::vector<double> sorted_ascending, std::uint64_t seed)
      : values_(std::move(sorted_ascending)), seed_(seed) {
    if (values_.empty()) throw OutOfRange("EmpiricalCdf: sample must be non-empty");
  }

  std::size_t size() const { return values_.size(); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& values() const { return values_; }

  /// Order statistic at index ceil(q*n) - 1, for q in (0, 1].
  double quantile(double q) const {
    if (!(q > 0.0 && q <= 1.0)) throw OutOfRange("EmpiricalCdf::quantile: q must lie in (0,1]");
    const auto n = static_cast<double>(values_.size());
    auto idx = static_cast<std::size_t>(std::ceil(q * n)) - 1;
    if (idx >= values_.size()) idx = values_.size() - 1;
    return values_[idx];
  }

  /// Fraction of samples <= t (ties inclusive).
  double cdf(double t) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
  }

 private:
  std::vector<double> values_;
  std::uint64_t seed_;
};

}  // namespace unicr
