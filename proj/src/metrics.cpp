#include "unicr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "unicr/errors.hpp"

namespace unicr {

double certified_accuracy(std::span<const CertificationRecord> records, double r) {
  if (records.empty()) throw OutOfRange("certified_accuracy: records must be non-empty");
  if (r < 0.0) throw OutOfRange("certified_accuracy: r must be >= 0");
  std::size_t hits = 0;
  for (const auto& rec : records) {
    if (rec.prediction_correct && rec.radius > r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

AccuracyCurve make_accuracy_curve(std::span<const CertificationRecord> records, double sigma_tag,
                                  bool match_all) {
  std::vector<CertificationRecord> subset;
  for (const auto& rec : records) {
    if (match_all || rec.sigma_tag == sigma_tag) subset.push_back(rec);
  }
  if (subset.empty()) throw OutOfRange("make_accuracy_curve: no records for the given sigma tag");

  std::set<double> breakpoints{0.0};
  for (const auto& rec : subset) {
    if (rec.prediction_correct && rec.radius > 0.0) breakpoints.insert(rec.radius);
  }
  AccuracyCurve curve;
  curve.sigma_tag = sigma_tag;
  for (double b : breakpoints) {
    curve.points.emplace_back(b, certified_accuracy(subset, b));
  }
  return curve;
}

namespace {

// Curve value at x: the accuracy of the last point with R <= x.
double curve_value(const AccuracyCurve& curve, double x) {
  double value = curve.points.front().second;
  for (const auto& [r, acc] : curve.points) {
    if (r <= x) {
      value = acc;
    } else {
      break;
    }
  }
  return value;
}

void validate_curve(const AccuracyCurve& curve) {
  if (curve.points.empty()) throw OutOfRange("robustness_score: curve has no points");
  if (curve.points.front().first != 0.0) {
    throw OutOfRange("robustness_score: curves must start at radius 0");
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& [r, acc] = curve.points[i];
    if (!(acc >= 0.0 && acc <= 1.0)) throw OutOfRange("robustness_score: accuracy outside [0,1]");
    if (i > 0) {
      if (r <= curve.points[i - 1].first) {
        throw OutOfRange("robustness_score: curve points must be strictly increasing in radius");
      }
      if (acc > curve.points[i - 1].second) {
        throw OutOfRange("robustness_score: accuracy must be non-increasing in radius");
      }
    }
  }
}

}  // namespace

double robustness_score(std::span<const AccuracyCurve> curves, double r_max) {
  if (curves.empty()) throw OutOfRange("robustness_score: need at least one curve");
  if (!(r_max >= 0.0) || !std::isfinite(r_max)) {
    throw OutOfRange("robustness_score: r_max must be finite and >= 0");
  }
  std::set<double> cuts{0.0, r_max};
  for (const auto& curve : curves) {
    validate_curve(curve);
    if (curve.points.back().first > r_max) {
      throw OutOfRange("robustness_score: r_max is below the largest certified radius");
    }
    for (const auto& [r, acc] : curve.points) {
      if (r < r_max) cuts.insert(r);
    }
  }

  double score = 0.0;
  auto it = cuts.begin();
  double left = *it;
  for (++it; it != cuts.end(); ++it) {
    const double right = *it;
    double envelope = 0.0;
    for (const auto& curve : curves) envelope = std::max(envelope, curve_value(curve, left));
    score += envelope * (right - left);
    left = right;
  }
  return score;
}

}  // namespace unicr
