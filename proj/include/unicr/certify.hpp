#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "unicr/likelihood_ratio.hpp"
#include "unicr/noise_pdf.hpp"

namespace unicr {

/// Configuration of the scalar (boundary-scaling) binary search.
struct ScalarSearchConfig {
  double k_tolerance = 0.005;  // threshold on |K|
  int max_iterations = 30;     // bisection iteration budget
  double lambda_max = 0.0;     // bracketing cap; <= 0 selects 50x the noise RMS
  std::size_t n_samples = 100000;
  std::uint64_t base_seed = 12345;

  void validate() const;
  double effective_lambda_max(const NoisePdf& pdf) const;
};

/// Configuration of the PSO direction search.
struct PsoConfig {
  int particles = 16;
  int iterations = 30;
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;
  double init_magnitude = 0.1;

  void validate() const;
};

enum class CertifyStatus { Certified, NoBoundaryCrossing, Abstain };

const char* status_name(CertifyStatus status);

/// Result of the scalar search along one direction. `crossed` is false when
/// no lambda on the doubling ladder up to lambda_max produced K < 0 (the
/// boundary was never crossed; a value, not a fault).
struct ScalarOutcome {
  bool crossed = false;
  double lambda = 0.0;
  BoundaryGap gap;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double initial_bracket_width = 0.0;
  int bisection_iterations = 0;
};

/// Certified radius for one norm, with the minimizing direction and scalar.
struct RadiusResult {
  double radius = 0.0;
  std::vector<double> direction;  // unit l2 norm when certified
  double lambda = 0.0;
  BoundaryGap gap;
  double norm_p = 2.0;  // +infinity encodes the l-infinity norm
  CertifyStatus status = CertifyStatus::NoBoundaryCrossing;
  double confidence = 0.0;
};

/// lp norm for p > 0; p = +infinity gives the max norm.
double lp_norm(std::span<const double> v, double p);

/// Scales the direction onto the robustness boundary: doubles lambda from
/// 0.05 until K changes sign (capped at lambda_max), then bisects until
/// |K| <= k_tolerance or the iteration budget is spent. Thresholds are
/// recomputed from a fresh forward pass at every trial lambda; the gap pass
/// uses a disjoint seed stream.
ScalarOutcome scalar_optimize(const NoisePdf& pdf, std::span<const double> direction,
                              const ProbabilityBounds& bounds, const ScalarSearchConfig& cfg,
                              bool binary);

/// Two-phase optimization: PSO over unit directions minimizing
/// ||lambda(direction) * direction||_p with lambda from scalar_optimize.
/// Initial particles are axis-aligned one-hot vectors for finite p and the
/// uniform vector (with sign variants) for p = infinity, plus random unit
/// directions; particles that never cross the boundary cost +infinity.
RadiusResult certified_radius(const NoisePdf& pdf, const ProbabilityBounds& bounds, double norm_p,
                              const ScalarSearchConfig& scfg, const PsoConfig& pcfg,
                              double alpha0 = 0.0, double dkw_delta = 0.1);

/// One certified_radius call per entry of p_list with shared seeds.
std::vector<std::pair<double, RadiusResult>> radius_vs_p_curve(
    const NoisePdf& pdf, const ProbabilityBounds& bounds, std::span<const double> p_list,
    const ScalarSearchConfig& scfg, const PsoConfig& pcfg);

/// Certification confidence (1-alpha0)^2 * (1 - 2 exp(-2 n delta^2))^4,
/// clamped to [0, 1].
double certification_confidence(std::size_t n, double delta_dkw, double alpha0);

}  // namespace unicr
