#include <doctest.h>

#include <cmath>
#include <vector>

#include "unicr/certify.hpp"
#include "unicr/errors.hpp"
#include "unicr/oracles.hpp"

using namespace unicr;

namespace {

NoisePdf std_gaussian(int dim) { return NoisePdf{Family::Gaussian, std::sqrt(2.0), 1.0, dim}; }

std::vector<double> one_hot(int dim, int axis = 0) {
  std::vector<double> v(dim, 0.0);
  v[axis] = 1.0;
  return v;
}

ScalarSearchConfig fast_scalar(std::size_t n, std::uint64_t seed = 2024) {
  ScalarSearchConfig cfg;
  cfg.n_samples = n;
  cfg.base_seed = seed;
  return cfg;
}

PsoConfig small_pso(int particles, int iterations) {
  PsoConfig cfg;
  cfg.particles = particles;
  cfg.iterations = iterations;
  return cfg;
}

}  // namespace

TEST_CASE("scalar search lands on the Gaussian binary root") {
  const NoisePdf pdf = std_gaussian(4);
  const auto dir = one_hot(4);
  {
    const auto out = scalar_optimize(pdf, dir, ProbabilityBounds::binary_case(0.9),
                                     fast_scalar(1000000), true);
    REQUIRE(out.crossed);
    CHECK(out.lambda == doctest::Approx(1.2816).epsilon(0.02 / 1.2816));
    CHECK(std::fabs(out.gap.k) <= 0.005);
  }
  {
    const auto out = scalar_optimize(pdf, dir, ProbabilityBounds::binary_case(0.99),
                                     fast_scalar(1000000), true);
    REQUIRE(out.crossed);
    CHECK(std::fabs(out.lambda - 2.3263) <= 0.03);
  }
}

TEST_CASE("scalar search reports the Laplace low-margin regime as a value") {
  // sigma = 1 Laplace against a small bracketing cap: the ladder never sees
  // K < 0, which must surface as NoBoundaryCrossing rather than a throw.
  const NoisePdf pdf{Family::Laplace, 1.0 / std::sqrt(2.0), 1.0, 4};
  ScalarSearchConfig cfg = fast_scalar(20000);
  cfg.lambda_max = 0.06;
  const auto out =
      scalar_optimize(pdf, one_hot(4), ProbabilityBounds::binary_case(0.55), cfg, true);
  CHECK_FALSE(out.crossed);
}

TEST_CASE("bisection halves the bracket exactly per iteration") {
  const NoisePdf pdf = std_gaussian(2);
  const auto out = scalar_optimize(pdf, one_hot(2), ProbabilityBounds::binary_case(0.9),
                                   fast_scalar(50000), true);
  REQUIRE(out.crossed);
  const double expected =
      out.initial_bracket_width * std::pow(2.0, -out.bisection_iterations);
  CHECK(out.bracket_hi - out.bracket_lo == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("scalar lambda is direction-invariant for Gaussian noise") {
  const NoisePdf pdf = std_gaussian(8);
  Rng rng(5150);
  std::vector<double> lambdas;
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> dir(8);
    for (double& x : dir) x = rng.normal();
    const auto out =
        scalar_optimize(pdf, dir, ProbabilityBounds::binary_case(0.9), fast_scalar(100000), true);
    REQUIRE(out.crossed);
    lambdas.push_back(out.lambda);
  }
  for (double l : lambdas) CHECK(l == doctest::Approx(lambdas.front()).epsilon(0.02));
}

TEST_CASE("certified radius matches the cohen value in l2") {
  const NoisePdf pdf = std_gaussian(16);
  const auto result = certified_radius(pdf, ProbabilityBounds::binary_case(0.9), 2.0,
                                       fast_scalar(20000), small_pso(3, 2));
  REQUIRE(result.status == CertifyStatus::Certified);
  CHECK(result.radius == doctest::Approx(1.2816).epsilon(0.05));
  CHECK(lp_norm(result.direction, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.radius ==
        doctest::Approx(result.lambda * lp_norm(result.direction, 2.0)).epsilon(1e-12));
}

TEST_CASE("certified radius in max norm picks up the 1/sqrt(d) geometry") {
  const NoisePdf pdf = std_gaussian(16);
  const auto result =
      certified_radius(pdf, ProbabilityBounds::binary_case(0.9),
                       std::numeric_limits<double>::infinity(), fast_scalar(20000), small_pso(3, 2));
  REQUIRE(result.status == CertifyStatus::Certified);
  CHECK(result.radius == doctest::Approx(1.2816 / 4.0).epsilon(0.07));
}

TEST_CASE("equal probability bounds certify radius zero") {
  const NoisePdf pdf = std_gaussian(4);
  const auto result = certified_radius(pdf, ProbabilityBounds::two_class(0.7, 0.7), 2.0,
                                       fast_scalar(5000), small_pso(2, 1));
  CHECK(result.status == CertifyStatus::Certified);
  CHECK(result.radius == 0.0);
  CHECK(result.lambda == 0.0);
}

TEST_CASE("certified radius is monotone in p_a") {
  const NoisePdf pdf = std_gaussian(4);
  double prev = 0.0;
  for (double pa : {0.7, 0.8, 0.9}) {
    const auto result = certified_radius(pdf, ProbabilityBounds::binary_case(pa), 2.0,
                                         fast_scalar(20000), small_pso(2, 1));
    REQUIRE(result.status == CertifyStatus::Certified);
    CHECK(result.radius >= prev - 0.02 * 1.28);
    prev = result.radius;
  }
}

TEST_CASE("doubling alpha doubles the radius") {
  NoisePdf pdf = std_gaussian(4);
  const auto base = certified_radius(pdf, ProbabilityBounds::binary_case(0.9), 1.0,
                                     fast_scalar(40000), small_pso(2, 1));
  pdf.alpha *= 2.0;
  const auto scaled = certified_radius(pdf, ProbabilityBounds::binary_case(0.9), 1.0,
                                       fast_scalar(40000), small_pso(2, 1));
  REQUIRE(base.status == CertifyStatus::Certified);
  REQUIRE(scaled.status == CertifyStatus::Certified);
  CHECK(scaled.radius == doctest::Approx(2.0 * base.radius).epsilon(0.03));
}

TEST_CASE("binary mode matches two-class certification with complementary bounds") {
  const NoisePdf pdf = std_gaussian(4);
  const auto binary = certified_radius(pdf, ProbabilityBounds::binary_case(0.9), 2.0,
                                       fast_scalar(50000), small_pso(2, 1));
  const auto two_class = certified_radius(pdf, ProbabilityBounds::two_class(0.9, 0.1), 2.0,
                                          fast_scalar(50000), small_pso(2, 1));
  REQUIRE(binary.status == CertifyStatus::Certified);
  REQUIRE(two_class.status == CertifyStatus::Certified);
  CHECK(binary.radius == doctest::Approx(two_class.radius).epsilon(0.02));
}

TEST_CASE("certified gap stays within tolerance under fresh resampling") {
  const NoisePdf pdf = std_gaussian(4);
  ScalarSearchConfig cfg = fast_scalar(100000);
  cfg.k_tolerance = 0.01;
  const auto result =
      certified_radius(pdf, ProbabilityBounds::binary_case(0.9), 2.0, cfg, small_pso(2, 1));
  REQUIRE(result.status == CertifyStatus::Certified);
  CHECK(std::fabs(result.gap.k) <= cfg.k_tolerance);
  // Re-evaluate the returned point with a fresh seed stream.
  const auto fwd = forward_ratio_cdf(pdf, result.direction, result.lambda, cfg.n_samples, 986532);
  const auto thr = compute_thresholds(fwd, ProbabilityBounds::binary_case(0.9));
  const auto gap =
      boundary_gap(pdf, result.direction, result.lambda, thr, cfg.n_samples, 986533, true);
  CHECK(std::fabs(gap.k) <= 2.0 * cfg.k_tolerance);
}

TEST_CASE("radius_vs_p with a single entry reduces to certified_radius") {
  const NoisePdf pdf = std_gaussian(4);
  const std::vector<double> ps{2.0};
  const auto curve =
      radius_vs_p_curve(pdf, ProbabilityBounds::binary_case(0.8), ps, fast_scalar(10000),
                        small_pso(2, 1));
  const auto direct = certified_radius(pdf, ProbabilityBounds::binary_case(0.8), 2.0,
                                       fast_scalar(10000), small_pso(2, 1));
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].second.radius == direct.radius);
  CHECK(curve[0].second.lambda == direct.lambda);
}

TEST_CASE("certification confidence formula") {
  CHECK(certification_confidence(400, 0.1, 0.001) == doctest::Approx(0.99533).epsilon(2e-4));
  CHECK(std::fabs(certification_confidence(400, 0.1, 0.001) - 0.99533) < 1e-4);
  CHECK(certification_confidence(1000, 0.1, 0.001) == doctest::Approx(0.99800).epsilon(1e-4));
  CHECK(certification_confidence(1000000, 0.1, 0.0) == doctest::Approx(1.0));
  double prev = -1.0;
  for (std::size_t n : {10UL, 50UL, 200UL, 400UL, 1000UL, 5000UL}) {
    const double c = certification_confidence(n, 0.1, 0.001);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("lp_norm covers finite, fractional and infinite orders") {
  const std::vector<double> v{3.0, -4.0};
  CHECK(lp_norm(v, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm(v, 1.0) == doctest::Approx(7.0));
  CHECK(lp_norm(v, std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
  CHECK(lp_norm(v, 0.5) == doctest::Approx(std::pow(std::sqrt(3.0) + 2.0, 2.0)));
  CHECK_THROWS_AS(lp_norm(v, 0.0), OutOfRange);
}
