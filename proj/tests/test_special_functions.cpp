#include <doctest.h>

#include <cmath>

#include "unicr/errors.hpp"
#include "unicr/special_functions.hpp"

using namespace unicr;

TEST_CASE("normal quantile matches tabulated values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-10));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.99) == doctest::Approx(2.3263478740408408).epsilon(1e-10));
  CHECK(normal_quantile(0.1) == doctest::Approx(-1.2815515655446004).epsilon(1e-10));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
}

TEST_CASE("normal quantile round-trips through the CDF") {
  for (double p = 0.001; p < 1.0; p += 0.007) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("normal quantile rejects the endpoints") {
  CHECK_THROWS_AS(normal_quantile(0.0), OutOfRange);
  CHECK_THROWS_AS(normal_quantile(1.0), OutOfRange);
  CHECK_THROWS_AS(normal_quantile(-0.2), OutOfRange);
}

TEST_CASE("regularized incomplete gamma against closed forms") {
  for (double x = 0.1; x < 8.0; x += 0.37) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-11));
  }
  CHECK(gamma_p(3.0, 0.0) == 0.0);
}

TEST_CASE("incomplete beta basics and symmetry") {
  for (double x = 0.05; x < 1.0; x += 0.1) {
    CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(incomplete_beta(2.0, 1.0, x) == doctest::Approx(x * x).epsilon(1e-12));
    CHECK(incomplete_beta(3.0, 2.0, x) ==
          doctest::Approx(1.0 - incomplete_beta(2.0, 3.0, 1.0 - x)).epsilon(1e-11));
  }
}

TEST_CASE("erfcx agrees with high-precision references on both branches") {
  CHECK(erfcx_positive(0.0) == doctest::Approx(1.0));
  CHECK(erfcx_positive(1.0) == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-12));
  // Reference values straddling the branch switch at 6.
  CHECK(erfcx_positive(5.999999) == doctest::Approx(0.09277658286089426).epsilon(1e-10));
  CHECK(erfcx_positive(6.000001) == doctest::Approx(0.09277655274018728).epsilon(1e-10));
  CHECK(erfcx_positive(8.0) == doctest::Approx(0.06998516620088093).epsilon(1e-10));
  const double x = 30.0;
  CHECK(erfcx_positive(x) ==
        doctest::Approx(1.0 / (x * std::sqrt(3.141592653589793))).epsilon(1e-3));
}

TEST_CASE("binomial lower bound: all-success case is alpha^(1/n)") {
  CHECK(binomial_lower_bound(1000, 1000, 0.001) ==
        doctest::Approx(std::pow(0.001, 1.0 / 1000)).epsilon(1e-12));
  CHECK(binomial_lower_bound(0, 50, 0.05) == 0.0);
}

TEST_CASE("binomial lower bound inverts the binomial tail") {
  const double p = binomial_lower_bound(900, 1000, 0.001);
  CHECK(p < 0.9);
  CHECK(incomplete_beta(900.0, 101.0, p) == doctest::Approx(0.001).epsilon(1e-8));
}

TEST_CASE("binomial lower bound never exceeds the empirical fraction") {
  for (std::uint64_t k : {1ULL, 10ULL, 250ULL, 499ULL, 500ULL}) {
    CHECK(binomial_lower_bound(k, 500, 0.01) <= static_cast<double>(k) / 500.0);
  }
}
