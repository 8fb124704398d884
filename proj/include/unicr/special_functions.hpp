#pragma once

#include <cstdint>

namespace unicr {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, Wichura's PPND16 rational approximation.
/// Absolute error below 1e-15 over (0, 1); throws OutOfRange at {0, 1}.
double normal_quantile(double p);

/// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
double erfcx_positive(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// One-sided lower Clopper-Pearson bound: the largest p0 such that
/// P(Bin(n, p0) >= k) <= alpha0. Exact tail inversion; k = n reduces to
/// alpha0^(1/n), k = 0 gives 0.
double binomial_lower_bound(std::uint64_t k, std::uint64_t n, double alpha0);

}  // namespace unicr
