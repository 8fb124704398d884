#pragma once

#include <cstdint>
#include <span>

#include "unicr/empirical_cdf.hpp"
#include "unicr/noise_pdf.hpp"

namespace unicr {

/// Bounds on the top-class probability (lower) and runner-up probability
/// (upper). Binary mode ties p_b_upper to 1 - p_a_lower and requires
/// p_a_lower > 1/2.
struct ProbabilityBounds {
  double p_a_lower = 0.0;
  double p_b_upper = 0.0;
  bool binary = false;

  static ProbabilityBounds two_class(double p_a_lower, double p_b_upper);
  static ProbabilityBounds binary_case(double p_a_lower);
};

/// Log-space likelihood-ratio thresholds: log_t_a is the p_a_lower quantile
/// of the forward ratio CDF, log_t_b the (1 - p_b_upper) quantile of the same
/// CDF, so the empirical mass at or above t_b is >= p_b_upper.
struct AuxiliaryThresholds {
  double log_t_a = 0.0;
  double log_t_b = 0.0;
};

/// Signed distance of a scaled perturbation from the robustness boundary:
/// k = P(reverse ratio <= t_a) - P(reverse ratio >= t_b), in [-1, 1].
struct BoundaryGap {
  double k = 0.0;
  std::size_t n = 0;
};

/// n sorted samples of log[mu(eps - lambda*delta) / mu(eps)], eps ~ pdf.
/// Per-coordinate terms with a zero shift contribute exactly 0 and are
/// skipped. Throws NonFiniteRatio if any summed log-ratio is non-finite.
EmpiricalCdf forward_ratio_cdf(const NoisePdf& pdf, std::span<const double> delta, double lambda,
                               std::size_t n, std::uint64_t seed);

AuxiliaryThresholds compute_thresholds(const EmpiricalCdf& cdf, const ProbabilityBounds& bounds);

/// Draws n fresh eps ~ pdf, forms reverse log-ratios
/// log[mu(eps) / mu(eps + lambda*delta)] and counts tail masses against the
/// thresholds (ties inclusive on both sides). In binary mode
/// k = P(<= t_a) - 1/2. The seed must be disjoint from the forward pass.
BoundaryGap boundary_gap(const NoisePdf& pdf, std::span<const double> delta, double lambda,
                         const AuxiliaryThresholds& thresholds, std::size_t n, std::uint64_t seed,
                         bool binary);

}  // namespace unicr
