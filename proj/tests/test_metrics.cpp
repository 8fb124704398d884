#include <doctest.h>

#include <vector>

#include "unicr/errors.hpp"
#include "unicr/metrics.hpp"
#include "unicr/rng.hpp"

using namespace unicr;

TEST_CASE("certified accuracy counts strict radius exceedance") {
  const std::vector<CertificationRecord> records{
      {0.5, true, 1.0}, {1.5, true, 1.0}, {2.5, true, 1.0}};
  CHECK(certified_accuracy(records, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("abstentions are excluded at radius zero") {
  std::vector<CertificationRecord> records;
  for (int i = 0; i < 4; ++i) records.push_back({0.7 + 0.1 * i, true, 1.0});
  records.push_back({0.0, false, 1.0});  // abstention
  CHECK(certified_accuracy(records, 0.0) == doctest::Approx(0.8));
}

TEST_CASE("all-incorrect records give zero accuracy everywhere") {
  const std::vector<CertificationRecord> records{{1.0, false, 1.0}, {2.0, false, 1.0}};
  for (double r : {0.0, 0.5, 1.5, 3.0}) CHECK(certified_accuracy(records, r) == 0.0);
}

TEST_CASE("robustness score integrates the step envelope exactly") {
  AccuracyCurve c1{1.0, {{0.0, 1.0}, {1.0, 0.0}}};
  AccuracyCurve c2{2.0, {{0.0, 0.5}, {2.0, 0.0}}};
  const std::vector<AccuracyCurve> curves{c1, c2};
  CHECK(robustness_score(curves, 2.0) == doctest::Approx(1.5));

  const std::vector<AccuracyCurve> single{c1};
  CHECK(robustness_score(single, 2.0) == doctest::Approx(1.0));

  const std::vector<AccuracyCurve> dup{c2, c2, c2};
  CHECK(robustness_score(dup, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("accuracy curves built from records are right-continuous steps") {
  const std::vector<CertificationRecord> records{
      {1.0, true, 0.5}, {1.0, true, 0.5}, {2.0, true, 0.5}, {0.0, false, 0.5}};
  const AccuracyCurve curve = make_accuracy_curve(records, 0.5);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0] == std::pair<double, double>{0.0, 0.75});
  CHECK(curve.points[1] == std::pair<double, double>{1.0, 0.25});
  CHECK(curve.points[2] == std::pair<double, double>{2.0, 0.0});
  // Score equals the hand integral 0.75*1 + 0.25*1.
  const std::vector<AccuracyCurve> curves{curve};
  CHECK(robustness_score(curves, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("adding a curve never decreases the score") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto random_curve = [&](double sigma) {
      std::vector<CertificationRecord> recs;
      const int n = 5 + static_cast<int>(rng.uniform01() * 10);
      for (int i = 0; i < n; ++i) {
        recs.push_back({rng.uniform01() * 3.0, rng.uniform01() < 0.7, sigma});
      }
      return make_accuracy_curve(recs, sigma);
    };
    std::vector<AccuracyCurve> curves{random_curve(0.5)};
    const double base = robustness_score(curves, 3.0);
    curves.push_back(random_curve(1.0));
    const double extended = robustness_score(curves, 3.0);
    CHECK(extended >= base - 1e-12);
  }
}

TEST_CASE("robustness score validates its inputs") {
  const AccuracyCurve good{1.0, {{0.0, 1.0}, {1.0, 0.0}}};
  const AccuracyCurve not_monotone{1.0, {{0.0, 0.4}, {1.0, 0.6}}};
  const AccuracyCurve no_origin{1.0, {{0.5, 0.4}}};
  std::vector<AccuracyCurve> curves{good};
  CHECK_THROWS_AS(robustness_score(curves, 0.5), OutOfRange);
  curves[0] = not_monotone;
  CHECK_THROWS_AS(robustness_score(curves, 2.0), OutOfRange);
  curves[0] = no_origin;
  CHECK_THROWS_AS(robustness_score(curves, 2.0), OutOfRange);
  CHECK_THROWS_AS(robustness_score({}, 1.0), OutOfRange);
}
