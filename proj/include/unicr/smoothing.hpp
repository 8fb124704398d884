#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "unicr/certify.hpp"
#include "unicr/noise_pdf.hpp"

namespace unicr {

/// Deterministic base classifier. Implementations must be total on finite
/// inputs and safe to call concurrently.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;
  virtual int classify(std::span<const double> x) const = 0;
};

/// Nearest-prototype classifier; distance ties break toward the lowest label.
class NearestPrototypeClassifier : public BaseClassifier {
 public:
  struct Prototype {
    std::vector<double> vector;
    int label = 0;
  };

  explicit NearestPrototypeClassifier(std::vector<Prototype> prototypes);

  int classify(std::span<const double> x) const override;
  int dim() const { return dim_; }
  const std::vector<Prototype>& prototypes() const { return prototypes_; }

  /// Loads the JSON definition file: an array of {"label": int,
  /// "vector": [reals]}.
  static NearestPrototypeClassifier from_json_file(const std::string& path);

 private:
  std::vector<Prototype> prototypes_;
  int dim_ = 0;
};

struct SmoothedPrediction {
  int top_class = -1;
  double p_a_lower = 0.0;
  bool abstained = true;
  std::size_t n0 = 0;
  std::size_t n = 0;
  double alpha0 = 0.0;
};

struct McConfig {
  std::size_t n0 = 100;  // selection-pass size
  std::size_t n = 1000;  // estimation-pass size
  double alpha0 = 0.001;
  std::uint64_t seed = 12345;
};

/// Two-pass Monte Carlo smoothed prediction: n0 noisy evaluations select the
/// plurality class, n fresh evaluations count its successes, and p_a_lower is
/// the exact one-sided lower binomial bound at level alpha0 (the all-success
/// case reduces to alpha0^(1/n)). Abstains when p_a_lower <= 1/2.
SmoothedPrediction smoothed_predict(const BaseClassifier& f, std::span<const double> x,
                                    const NoisePdf& pdf, std::size_t n0, std::size_t n,
                                    double alpha0, std::uint64_t seed);

/// Binary-mode certification of one input: smoothed_predict composed with
/// certified_radius; Abstain status when the prediction abstains.
RadiusResult certify_input(const BaseClassifier& f, std::span<const double> x, const NoisePdf& pdf,
                           double norm_p, const McConfig& mc, const ScalarSearchConfig& scfg,
                           const PsoConfig& pcfg);

}  // namespace unicr
