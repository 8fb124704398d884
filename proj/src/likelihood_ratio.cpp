#include "unicr/likelihood_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "unicr/errors.hpp"

namespace unicr {
namespace {

struct ShiftedCoords {
  std::vector<double> shifts;  // nonzero per-coordinate shifts lambda*delta_j
};

ShiftedCoords collect_shifts(const NoisePdf& pdf, std::span<const double> delta, double lambda) {
  if (delta.size() != static_cast<std::size_t>(pdf.dim)) {
    throw OutOfRange("delta dimension " + std::to_string(delta.size()) +
                     " does not match pdf dim " + std::to_string(pdf.dim));
  }
  bool any_nonzero = false;
  ShiftedCoords sc;
  for (double dj : delta) {
    if (!std::isfinite(dj) || !std::isfinite(lambda)) {
      throw NonFiniteRatio("non-finite shift component");
    }
    if (dj != 0.0) any_nonzero = true;
    const double s = lambda * dj;
    if (s != 0.0) sc.shifts.push_back(s);
  }
  if (!any_nonzero) throw OutOfRange("delta must be non-zero");
  return sc;
}

}  // namespace

ProbabilityBounds ProbabilityBounds::two_class(double p_a_lower, double p_b_upper) {
  if (!(p_a_lower > 0.0 && p_a_lower <= 1.0)) {
    throw OutOfRange("p_a_lower must lie in (0,1]");
  }
  if (!(p_b_upper >= 0.0 && p_b_upper < 1.0)) {
    throw OutOfRange("p_b_upper must lie in [0,1)");
  }
  if (p_a_lower < p_b_upper) throw OutOfRange("p_a_lower must be >= p_b_upper");
  return ProbabilityBounds{p_a_lower, p_b_upper, false};
}

ProbabilityBounds ProbabilityBounds::binary_case(double p_a_lower) {
  if (!(p_a_lower > 0.5 && p_a_lower <= 1.0)) {
    throw OutOfRange("binary certification requires p_a_lower in (1/2, 1]");
  }
  return ProbabilityBounds{p_a_lower, 1.0 - p_a_lower, true};
}

EmpiricalCdf forward_ratio_cdf(const NoisePdf& pdf, std::span<const double> delta, double lambda,
                               std::size_t n, std::uint64_t seed) {
  pdf.validate();
  if (n < 100) throw OutOfRange("forward_ratio_cdf: n must be >= 100");
  if (lambda < 0.0) throw OutOfRange("forward_ratio_cdf: lambda must be >= 0");
  const ShiftedCoords sc = collect_shifts(pdf, delta, lambda);

  std::vector<double> log_ratios(n);
  double* out = log_ratios.data();
  run_chunked(n, seed, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t r = begin; r < end; ++r) {
      double sum = 0.0;
      for (double s : sc.shifts) {
        const double eps = sample_coordinate(pdf, rng);
        sum += log_density_unnormalized(pdf, eps - s) - log_density_unnormalized(pdf, eps);
      }
      if (!std::isfinite(sum)) throw NonFiniteRatio("forward log-ratio is non-finite");
      out[r] = sum;
    }
  });
  std::sort(log_ratios.begin(), log_ratios.end());
  return EmpiricalCdf(std::move(log_ratios), seed);
}

AuxiliaryThresholds compute_thresholds(const EmpiricalCdf& cdf, const ProbabilityBounds& bounds) {
  AuxiliaryThresholds thr;
  thr.log_t_a = cdf.quantile(bounds.p_a_lower);
  thr.log_t_b = cdf.quantile(1.0 - bounds.p_b_upper);
  return thr;
}

BoundaryGap boundary_gap(const NoisePdf& pdf, std::span<const double> delta, double lambda,
                         const AuxiliaryThresholds& thresholds, std::size_t n, std::uint64_t seed,
                         bool binary) {
  pdf.validate();
  if (n < 1) throw OutOfRange("boundary_gap: n must be >= 1");
  const ShiftedCoords sc = collect_shifts(pdf, delta, lambda);

  const std::size_t n_chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<std::size_t> count_a(n_chunks, 0);
  std::vector<std::size_t> count_b(n_chunks, 0);
  run_chunked(n, seed, [&](std::size_t chunk, std::size_t begin, std::size_t end, Rng& rng) {
    std::size_t a = 0;
    std::size_t b = 0;
    for (std::size_t r = begin; r < end; ++r) {
      double sum = 0.0;
      for (double s : sc.shifts) {
        const double eps = sample_coordinate(pdf, rng);
        sum += log_density_unnormalized(pdf, eps) - log_density_unnormalized(pdf, eps + s);
      }
      if (!std::isfinite(sum)) throw NonFiniteRatio("reverse log-ratio is non-finite");
      if (sum <= thresholds.log_t_a) ++a;
      if (sum >= thresholds.log_t_b) ++b;
    }
    count_a[chunk] = a;
    count_b[chunk] = b;
  });

  std::size_t total_a = 0;
  std::size_t total_b = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    total_a += count_a[c];
    total_b += count_b[c];
  }
  const double p_below_a = static_cast<double>(total_a) / static_cast<double>(n);
  const double p_above_b = static_cast<double>(total_b) / static_cast<double>(n);
  BoundaryGap gap;
  gap.n = n;
  gap.k = binary ? p_below_a - 0.5 : p_below_a - p_above_b;
  return gap;
}

}  // namespace unicr
