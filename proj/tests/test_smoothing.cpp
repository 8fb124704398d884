#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "unicr/errors.hpp"
#include "unicr/smoothing.hpp"

using namespace unicr;

namespace {

NearestPrototypeClassifier two_blob_classifier() {
  return NearestPrototypeClassifier({{{10.0, 0.0}, 0}, {{-10.0, 0.0}, 1}});
}

const NoisePdf kGauss2{Family::Gaussian, std::sqrt(2.0), 1.0, 2};

}  // namespace

TEST_CASE("nearest prototype classification with lowest-label ties") {
  const NearestPrototypeClassifier f({{{1.0, 0.0}, 3}, {{-1.0, 0.0}, 1}});
  const std::vector<double> right{2.0, 0.0};
  const std::vector<double> left{-2.0, 0.0};
  const std::vector<double> middle{0.0, 5.0};
  CHECK(f.classify(right) == 3);
  CHECK(f.classify(left) == 1);
  CHECK(f.classify(middle) == 1);  // ties break toward the lowest label
}

TEST_CASE("all-success prediction reproduces the alpha0^(1/n) bound") {
  const auto f = two_blob_classifier();
  const std::vector<double> x{10.0, 0.0};
  const auto pred = smoothed_predict(f, x, kGauss2, 100, 1000, 0.001, 7);
  CHECK(pred.top_class == 0);
  CHECK_FALSE(pred.abstained);
  CHECK(pred.p_a_lower == doctest::Approx(std::pow(0.001, 0.001)).epsilon(1e-9));
  CHECK(pred.p_a_lower == doctest::Approx(0.99311).epsilon(1e-4));
}

TEST_CASE("equidistant inputs abstain") {
  const auto f = two_blob_classifier();
  const std::vector<double> x{0.0, 0.0};
  const auto pred = smoothed_predict(f, x, kGauss2, 100, 1000, 0.001, 11);
  CHECK(pred.abstained);
  CHECK(pred.p_a_lower <= 0.55);
}

TEST_CASE("smoothed prediction is deterministic per seed") {
  const auto f = two_blob_classifier();
  const std::vector<double> x{3.0, 1.0};
  const auto a = smoothed_predict(f, x, kGauss2, 50, 400, 0.01, 13);
  const auto b = smoothed_predict(f, x, kGauss2, 50, 400, 0.01, 13);
  CHECK(a.top_class == b.top_class);
  CHECK(a.p_a_lower == b.p_a_lower);
  CHECK(a.abstained == b.abstained);
}

TEST_CASE("abstention likelihood grows toward the midpoint under paired seeds") {
  const auto f = two_blob_classifier();
  double prev = 1.0;
  for (double cx : {10.0, 2.0, 0.0}) {
    const std::vector<double> x{cx, 0.0};
    const auto pred = smoothed_predict(f, x, kGauss2, 100, 1000, 0.001, 17);
    CHECK(pred.p_a_lower <= prev + 1e-12);
    prev = pred.p_a_lower;
  }
}

TEST_CASE("certify_input composes prediction and radius search") {
  const auto f = two_blob_classifier();
  McConfig mc;
  mc.n0 = 100;
  mc.n = 1000;
  mc.alpha0 = 0.001;
  mc.seed = 23;
  ScalarSearchConfig scfg;
  scfg.n_samples = 20000;
  scfg.base_seed = 29;
  PsoConfig pcfg;
  pcfg.particles = 2;
  pcfg.iterations = 1;

  const std::vector<double> x{10.0, 0.0};
  const auto result = certify_input(f, x, kGauss2, 2.0, mc, scfg, pcfg);
  REQUIRE(result.status == CertifyStatus::Certified);
  // p_a_lower ~ 0.9931 puts the binary cohen radius near 2.46.
  CHECK(result.radius >= 2.0);
  CHECK(result.radius <= 3.0);

  const std::vector<double> mid{0.0, 0.0};
  const auto abstained = certify_input(f, mid, kGauss2, 2.0, mc, scfg, pcfg);
  CHECK(abstained.status == CertifyStatus::Abstain);
  CHECK(abstained.radius == 0.0);
}

TEST_CASE("certified perturbations do not flip the plurality vote") {
  const auto f = two_blob_classifier();
  McConfig mc;
  mc.seed = 31;
  ScalarSearchConfig scfg;
  scfg.n_samples = 20000;
  scfg.base_seed = 37;
  PsoConfig pcfg;
  pcfg.particles = 2;
  pcfg.iterations = 1;
  const std::vector<double> x{10.0, 0.0};
  const auto result = certify_input(f, x, kGauss2, 2.0, mc, scfg, pcfg);
  REQUIRE(result.status == CertifyStatus::Certified);

  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u(2);
    double nrm = 0.0;
    for (double& v : u) {
      v = rng.normal();
      nrm += v * v;
    }
    const double scale = 0.99 * result.radius / lp_norm(u, 2.0);
    std::vector<double> moved = x;
    for (int j = 0; j < 2; ++j) moved[j] += u[j] * scale;
    const auto pred = smoothed_predict(f, moved, kGauss2, 50, 500, 0.001, 43 + trial);
    CHECK(pred.top_class == 0);
  }
}

TEST_CASE("prototype classifier loads from its JSON definition file") {
  const std::string path = "test_protos.json";
  {
    std::ofstream out(path);
    out << R"([{"label": 0, "vector": [1.0, 2.0]}, {"label": 4, "vector": [-1.0, 0.5]}])";
  }
  const auto f = NearestPrototypeClassifier::from_json_file(path);
  CHECK(f.dim() == 2);
  CHECK(f.prototypes().size() == 2);
  const std::vector<double> x{1.0, 2.0};
  CHECK(f.classify(x) == 0);
  std::remove(path.c_str());

  CHECK_THROWS_AS(NearestPrototypeClassifier::from_json_file("missing.json"), OutOfRange);
}

TEST_CASE("mismatched dimensions are rejected") {
  const auto f = two_blob_classifier();
  const std::vector<double> x{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(f.classify(x), OutOfRange);
  const std::vector<double> ok{1.0, 2.0};
  CHECK_THROWS_AS(smoothed_predict(f, ok, NoisePdf{Family::Gaussian, 1.0, 1.0, 3}, 10, 10, 0.01, 1),
                  OutOfRange);
}
