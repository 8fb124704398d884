#pragma once

#include <stdexcept>
#include <string>

namespace unicr {

/// A noise family / parameter combination with a non-integrable density.
class InvalidPdf : public std::invalid_argument {
 public:
  explicit InvalidPdf(const std::string& what) : std::invalid_argument(what) {}
};

/// Variance normalization requested for a family without a finite second
/// moment (Cauchy, Pareto with shape <= 2).
class InfiniteVariance : public std::domain_error {
 public:
  explicit InfiniteVariance(const std::string& what) : std::domain_error(what) {}
};

/// A likelihood-ratio sample came out non-finite (shift left the support of
/// the density, or non-finite inputs).
class NonFiniteRatio : public std::runtime_error {
 public:
  explicit NonFiniteRatio(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside its documented domain.
class OutOfRange : public std::domain_error {
 public:
  explicit OutOfRange(const std::string& what) : std::domain_error(what) {}
};

/// The one-dimensional boundary oracle found no sign change on its grid.
class NoRoot : public std::runtime_error {
 public:
  explicit NoRoot(const std::string& what) : std::runtime_error(what) {}
};

/// Every cell of a hyper-parameter grid failed to evaluate.
class NoFeasibleCell : public std::runtime_error {
 public:
  explicit NoFeasibleCell(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace unicr
