#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unicr/rng.hpp"

namespace unicr {

/// Per-coordinate density families. Every density is even in its argument and
/// the joint density over R^d is the product of identical per-coordinate
/// factors.
enum class Family {
  Gaussian,            // exp(-|x/a|^2)
  Laplace,             // exp(-|x/a|)
  HyperbolicSecant,    // sech(x/a)
  GeneralNormal,       // exp(-|x/a|^b)
  Cauchy,              // a^2 / (x^2 + a^2)
  Pareto,              // (1 + |x/a|)^-(b+1)
  LaplaceGaussianMix,  // b exp(-|x/a|) + (1-b) exp(-|x/a|^2), b in [0,1]
  ExponentialMix,      // exp(-b |x/a| - (1-b) |x/a|^2), b in [0,1]
};

const char* family_name(Family family);
Family family_from_name(std::string_view name);
bool family_uses_beta(Family family);

/// Parameterized isotropic noise density. alpha is the per-coordinate scale,
/// beta the shape (ignored by single-parameter families), dim the input
/// dimensionality.
struct NoisePdf {
  Family family = Family::Gaussian;
  double alpha = 1.0;
  double beta = 1.0;
  int dim = 1;

  /// Throws InvalidPdf when the parameters give a non-integrable density.
  void validate() const;
};

/// Matrix of i.i.d. per-coordinate noise draws, one row per sample.
struct NoiseMatrix {
  std::vector<double> values;  // row-major, rows x cols
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  NoisePdf pdf;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values.data() + i * cols, cols);
  }
};

/// Log of the per-coordinate density up to an additive constant shared across
/// all z for the same pdf. Total on finite inputs.
double log_density_unnormalized(const NoisePdf& pdf, double z);

/// One draw from the normalized per-coordinate density.
double sample_coordinate(const NoisePdf& pdf, Rng& rng);

/// n x pdf.dim matrix of i.i.d. draws; deterministic given (pdf, n, seed).
NoiseMatrix sample(const NoisePdf& pdf, std::size_t n, std::uint64_t seed);

/// E[x^2] / alpha^2 for the normalized per-coordinate density.
/// Throws InfiniteVariance for Cauchy and Pareto with beta <= 2.
double second_moment_unit_scale(Family family, double beta);

/// alpha such that the per-coordinate RMS equals target_sigma.
double normalize_scale(Family family, double beta, double target_sigma);

/// Per-coordinate RMS of the pdf; falls back to alpha for families with an
/// infinite second moment (used only for scale heuristics, never reported as
/// a variance).
double sigma_equivalent_or_alpha(const NoisePdf& pdf);

/// Parses the text form `family=gaussian alpha=1.4142 beta=2.0 dim=16`
/// (whitespace-separated key=value pairs, case-insensitive family names).
NoisePdf parse_pdf_spec(std::string_view spec);
std::string to_spec_string(const NoisePdf& pdf);

}  // namespace unicr
