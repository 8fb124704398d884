#pragma once

#include <span>
#include <utility>
#include <vector>

namespace unicr {

/// One certified test point: its radius, whether the smoothed prediction was
/// correct, and the noise-variance label of the run that produced it.
/// Abstentions are encoded as radius 0 with prediction_correct false.
struct CertificationRecord {
  double radius = 0.0;
  bool prediction_correct = false;
  double sigma_tag = 0.0;
};

/// Right-continuous step curve of certified accuracy versus radius. The k-th
/// point (R_k, a_k) gives the accuracy on [R_k, R_{k+1}); points are sorted
/// by R with non-increasing accuracy and start at R = 0.
struct AccuracyCurve {
  double sigma_tag = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Fraction of records that are correct with radius strictly greater than r.
double certified_accuracy(std::span<const CertificationRecord> records, double r);

/// Builds the exact step curve of certified_accuracy over r for the records
/// carrying the given sigma tag (or all records when match_all is true).
AccuracyCurve make_accuracy_curve(std::span<const CertificationRecord> records, double sigma_tag,
                                  bool match_all = false);

/// Integral over [0, r_max] of the pointwise maximum envelope of the curves,
/// computed exactly as a sum over envelope segments.
double robustness_score(std::span<const AccuracyCurve> curves, double r_max);

}  // namespace unicr
