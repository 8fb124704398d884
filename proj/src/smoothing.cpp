#include "unicr/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "unicr/errors.hpp"
#include "unicr/special_functions.hpp"

namespace unicr {

NearestPrototypeClassifier::NearestPrototypeClassifier(std::vector<Prototype> prototypes)
    : prototypes_(std::move(prototypes)) {
  if (prototypes_.empty()) throw OutOfRange("classifier needs at least one prototype");
  dim_ = static_cast<int>(prototypes_.front().vector.size());
  for (const auto& p : prototypes_) {
    if (static_cast<int>(p.vector.size()) != dim_) {
      throw OutOfRange("all prototypes must share one dimensionality");
    }
    if (p.label < 0) throw OutOfRange("prototype labels must be >= 0");
  }
}

int NearestPrototypeClassifier::classify(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw OutOfRange("input dimension does not match the classifier");
  }
  double best_dist = 0.0;
  int best_label = -1;
  for (const auto& p : prototypes_) {
    double d = 0.0;
    for (int j = 0; j < dim_; ++j) {
      const double diff = x[j] - p.vector[j];
      d += diff * diff;
    }
    if (best_label < 0 || d < best_dist || (d == best_dist && p.label < best_label)) {
      best_dist = d;
      best_label = p.label;
    }
  }
  return best_label;
}

NearestPrototypeClassifier NearestPrototypeClassifier::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutOfRange("cannot open classifier file: " + path);
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_array()) throw OutOfRange("classifier file must hold a JSON array");
  std::vector<Prototype> protos;
  for (const auto& entry : doc) {
    Prototype p;
    p.label = entry.at("label").get<int>();
    p.vector = entry.at("vector").get<std::vector<double>>();
    protos.push_back(std::move(p));
  }
  return NearestPrototypeClassifier(std::move(protos));
}

namespace {

// Plurality label over n noisy evaluations; ties toward the lowest label.
// Per-chunk counts merge by integer addition, so the result is independent
// of the chunk execution order.
std::map<int, std::size_t> noisy_label_counts(const BaseClassifier& f, std::span<const double> x,
                                              const NoisePdf& pdf, std::size_t n,
                                              std::uint64_t seed) {
  const std::size_t dim = x.size();
  const std::size_t n_chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<std::map<int, std::size_t>> partial(n_chunks);
  run_chunked(n, seed, [&](std::size_t chunk, std::size_t begin, std::size_t end, Rng& rng) {
    std::vector<double> noisy(dim);
    auto& counts = partial[chunk];
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t j = 0; j < dim; ++j) noisy[j] = x[j] + sample_coordinate(pdf, rng);
      ++counts[f.classify(noisy)];
    }
  });
  std::map<int, std::size_t> counts;
  for (const auto& part : partial) {
    for (const auto& [label, c] : part) counts[label] += c;
  }
  return counts;
}

int plurality(const std::map<int, std::size_t>& counts) {
  int best = -1;
  std::size_t best_count = 0;
  for (const auto& [label, c] : counts) {
    if (c > best_count) {  // map iterates labels ascending: ties keep the lowest
      best = label;
      best_count = c;
    }
  }
  return best;
}

}  // namespace

SmoothedPrediction smoothed_predict(const BaseClassifier& f, std::span<const double> x,
                                    const NoisePdf& pdf, std::size_t n0, std::size_t n,
                                    double alpha0, std::uint64_t seed) {
  pdf.validate();
  if (x.size() != static_cast<std::size_t>(pdf.dim)) {
    throw OutOfRange("smoothed_predict: input dimension does not match pdf dim");
  }
  if (n0 < 1 || n < 1) throw OutOfRange("smoothed_predict: n0 and n must be >= 1");

  SmoothedPrediction pred;
  pred.n0 = n0;
  pred.n = n;
  pred.alpha0 = alpha0;

  const auto selection = noisy_label_counts(f, x, pdf, n0, derive_seed(seed, 0xA0ULL));
  pred.top_class = plurality(selection);

  const auto estimation = noisy_label_counts(f, x, pdf, n, derive_seed(seed, 0xA1ULL));
  std::size_t k = 0;
  if (auto it = estimation.find(pred.top_class); it != estimation.end()) k = it->second;
  pred.p_a_lower = binomial_lower_bound(k, n, alpha0);
  pred.abstained = pred.p_a_lower <= 0.5;
  return pred;
}

RadiusResult certify_input(const BaseClassifier& f, std::span<const double> x, const NoisePdf& pdf,
                           double norm_p, const McConfig& mc, const ScalarSearchConfig& scfg,
                           const PsoConfig& pcfg) {
  const SmoothedPrediction pred =
      smoothed_predict(f, x, pdf, mc.n0, mc.n, mc.alpha0, mc.seed);
  if (pred.abstained) {
    RadiusResult result;
    result.status = CertifyStatus::Abstain;
    result.norm_p = norm_p;
    result.confidence = certification_confidence(scfg.n_samples, 0.1, mc.alpha0);
    return result;
  }
  const ProbabilityBounds bounds = ProbabilityBounds::binary_case(pred.p_a_lower);
  return certified_radius(pdf, bounds, norm_p, scfg, pcfg, mc.alpha0);
}

}  // namespace unicr
