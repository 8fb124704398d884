#include "unicr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "unicr/errors.hpp"
#include "unicr/special_functions.hpp"

namespace unicr {

double cohen_gaussian_l2(double sigma, double p_a, double p_b) {
  if (!(sigma > 0.0)) throw OutOfRange("cohen_gaussian_l2: sigma must be > 0");
  if (!(p_a > 0.0 && p_a < 1.0) || !(p_b > 0.0 && p_b < 1.0)) {
    throw OutOfRange("cohen_gaussian_l2: probabilities must lie strictly in (0,1)");
  }
  if (p_b > p_a) throw OutOfRange("cohen_gaussian_l2: require p_b <= p_a");
  return 0.5 * sigma * (normal_quantile(p_a) - normal_quantile(p_b));
}

double gaussian_gap_closed_form(double sigma, double p_a, double lambda_times_norm) {
  if (!(sigma > 0.0)) throw OutOfRange("gaussian_gap_closed_form: sigma must be > 0");
  if (!(p_a > 0.5 && p_a < 1.0)) {
    throw OutOfRange("gaussian_gap_closed_form: p_a must lie in (1/2, 1)");
  }
  return normal_cdf(normal_quantile(p_a) - lambda_times_norm / sigma) - 0.5;
}

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrtPi = 1.7724538509055160;

// Normalized per-coordinate CDF and quantile for every catalog family.
// Written independently of the sampling path so the oracle cannot share a
// bug with the Monte Carlo pipeline it validates.
double coord_cdf(const NoisePdf& pdf, double z) {
  const double t = z / pdf.alpha;
  switch (pdf.family) {
    case Family::Gaussian:
      return normal_cdf(kSqrt2 * t);
    case Family::Laplace:
      return t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
    case Family::HyperbolicSecant:
      return (2.0 / kPi) * std::atan(std::exp(t));
    case Family::GeneralNormal: {
      const double g = gamma_p(1.0 / pdf.beta, std::pow(std::fabs(t), pdf.beta));
      return 0.5 + (t < 0.0 ? -0.5 * g : 0.5 * g);
    }
    case Family::Cauchy:
      return 0.5 + std::atan(t) / kPi;
    case Family::Pareto: {
      const double half_tail = 0.5 * std::pow(1.0 + std::fabs(t), -pdf.beta);
      return t < 0.0 ? half_tail : 1.0 - half_tail;
    }
    case Family::LaplaceGaussianMix: {
      const double w_l = 2.0 * pdf.beta / (2.0 * pdf.beta + (1.0 - pdf.beta) * kSqrtPi);
      const double f_lap = t < 0.0 ? 0.5 * std::exp(t) : 1.0 - 0.5 * std::exp(-t);
      const double f_gau = normal_cdf(kSqrt2 * t);
      return w_l * f_lap + (1.0 - w_l) * f_gau;
    }
    case Family::ExponentialMix: {
      const double b = pdf.beta;
      const double c = 1.0 - pdf.beta;
      const double x = std::fabs(t);
      double half;
      if (c <= 1e-12) {
        half = 0.5 * (1.0 - std::exp(-b * x));
      } else {
        // int_0^x e^{-b s - c s^2} ds relative to its limit, in erfcx form.
        const double u = b / (2.0 * std::sqrt(c));
        const double ratio =
            std::exp(-b * x - c * x * x) * erfcx_positive(u + std::sqrt(c) * x) / erfcx_positive(u);
        half = 0.5 * (1.0 - ratio);
      }
      return t < 0.0 ? 0.5 - half : 0.5 + half;
    }
  }
  return 0.0;
}

double coord_quantile(const NoisePdf& pdf, double u) {
  const double a = pdf.alpha;
  switch (pdf.family) {
    case Family::Gaussian:
      return a / kSqrt2 * normal_quantile(u);
    case Family::Laplace:
      return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    case Family::HyperbolicSecant:
      return a * std::log(std::tan(0.5 * kPi * u));
    case Family::Cauchy:
      return a * std::tan(kPi * (u - 0.5));
    case Family::Pareto:
      return u < 0.5 ? -a * (std::pow(2.0 * u, -1.0 / pdf.beta) - 1.0)
                     : a * (std::pow(2.0 * (1.0 - u), -1.0 / pdf.beta) - 1.0);
    default: {
      // GeneralNormal and the mixtures: bisection on the closed-form CDF.
      double lo = -a;
      double hi = a;
      while (coord_cdf(pdf, lo) > u) lo *= 2.0;
      while (coord_cdf(pdf, hi) < u) hi *= 2.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (coord_cdf(pdf, mid) < u) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, std::fabs(hi))) break;
      }
      return 0.5 * (lo + hi);
    }
  }
}

// One ratio statistic L(z) evaluated over a fixed CDF-space grid of the noise
// density. P(L <= t) is the total quantile-space measure of {L <= t}; grid
// cells cut by the level t are refined by bisection in z and charged via the
// closed-form CDF.
class RatioLevelMeasure {
 public:
  static constexpr int kGridCells = 4096;
  static constexpr double kEdgeMass = 1e-10;
  // Absorbs last-ulp smear of piecewise-constant ratio values so that
  // distribution atoms are counted inclusively on both sides of a tie.
  static constexpr double kTieEps = 1e-9;

  RatioLevelMeasure(const NoisePdf& pdf, std::vector<double> grid_z, double shift, bool forward)
      : pdf_(pdf), shift_(shift), forward_(forward), z_(std::move(grid_z)) {
    l_.resize(z_.size());
    for (std::size_t i = 0; i < z_.size(); ++i) l_[i] = eval(z_[i]);
  }

  double min_value() const { return *std::min_element(l_.begin(), l_.end()); }
  double max_value() const { return *std::max_element(l_.begin(), l_.end()); }

  // P(L <= t) with inclusive ties.
  double measure(double t) const {
    const double thr = t + kTieEps * std::max(1.0, std::fabs(t));
    const std::size_t m = z_.size();
    const double du = (1.0 - 2.0 * kEdgeMass) / static_cast<double>(m - 1);
    double mass = l_[0] <= thr ? kEdgeMass : 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const bool below_a = l_[i] <= thr;
      const bool below_b = l_[i + 1] <= thr;
      if (below_a && below_b) {
        mass += du;
      } else if (below_a != below_b) {
        const double z_cut = bisect_level(z_[i], z_[i + 1], thr);
        const double u_cut = coord_cdf(pdf_, z_cut);
        const double u_lo = kEdgeMass + du * static_cast<double>(i);
        const double u_hi = u_lo + du;
        mass += below_a ? std::max(0.0, u_cut - u_lo) : std::max(0.0, u_hi - u_cut);
      }
    }
    if (l_[m - 1] <= thr) mass += kEdgeMass;
    return std::min(1.0, mass);
  }

  // Smallest t with measure(t) >= p (the p-quantile of L, atoms inclusive).
  double quantile(double p) const {
    double lo = min_value() - 1.0;
    double hi = max_value() + 1.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (measure(mid) >= p) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (hi - lo <= 1e-13 * std::max(1.0, std::fabs(hi))) break;
    }
    return hi;
  }

 private:
  double eval(double z) const {
    return forward_ ? log_density_unnormalized(pdf_, z - shift_) - log_density_unnormalized(pdf_, z)
                    : log_density_unnormalized(pdf_, z) - log_density_unnormalized(pdf_, z + shift_);
  }

  double bisect_level(double z_lo, double z_hi, double thr) const {
    bool lo_below = eval(z_lo) <= thr;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (z_lo + z_hi);
      if ((eval(mid) <= thr) == lo_below) {
        z_lo = mid;
      } else {
        z_hi = mid;
      }
    }
    return 0.5 * (z_lo + z_hi);
  }

  const NoisePdf& pdf_;
  double shift_;
  bool forward_;
  std::vector<double> z_;
  std::vector<double> l_;
};

// Binary-case K(shift) computed from the analytic per-coordinate CDFs.
double oracle_gap(const NoisePdf& pdf, const std::vector<double>& grid_z, double shift,
                  double p_a) {
  RatioLevelMeasure forward(pdf, grid_z, shift, /*forward=*/true);
  const double log_t_a = forward.quantile(p_a);
  RatioLevelMeasure reverse(pdf, grid_z, shift, /*forward=*/false);
  return reverse.measure(log_t_a) - 0.5;
}

}  // namespace

double one_d_boundary_oracle(const NoisePdf& pdf, double p_a, double shift_grid_resolution) {
  pdf.validate();
  if (!(p_a > 0.5 && p_a < 1.0)) {
    throw OutOfRange("one_d_boundary_oracle: binary case requires p_a in (1/2, 1)");
  }
  if (!(shift_grid_resolution > 0.0)) {
    throw OutOfRange("one_d_boundary_oracle: resolution must be > 0");
  }

  // Quantile-space grid of the noise coordinate, shared by every shift.
  const int m = RatioLevelMeasure::kGridCells;
  std::vector<double> grid_z(m + 1);
  const double edge = RatioLevelMeasure::kEdgeMass;
  for (int i = 0; i <= m; ++i) {
    const double u = edge + (1.0 - 2.0 * edge) * static_cast<double>(i) / m;
    grid_z[i] = coord_quantile(pdf, u);
  }

  auto gap = [&](double shift) { return oracle_gap(pdf, grid_z, shift, p_a); };

  const double cap = 64.0 * std::max(shift_grid_resolution, sigma_equivalent_or_alpha(pdf));
  double lo = 0.0;
  double lo_gap = 0.5;  // K(0+) = p_a-quantile covers everything below it
  double hi = shift_grid_resolution;
  double hi_gap = gap(hi);
  if (hi_gap < 0.0) {
    // Root below the first grid point: shrink toward zero to re-bracket.
    double probe = hi;
    for (int i = 0; i < 60 && hi_gap < 0.0; ++i) {
      probe *= 0.5;
      const double g = gap(probe);
      if (g >= 0.0) {
        lo = probe;
        lo_gap = g;
        break;
      }
      hi = probe;
      hi_gap = g;
    }
    if (lo == 0.0) return 0.0;  // boundary collapses as p_a -> 1/2
  } else {
    while (hi_gap >= 0.0) {
      lo = hi;
      lo_gap = hi_gap;
      hi += shift_grid_resolution;
      if (hi > cap) {
        throw NoRoot("one_d_boundary_oracle: K never crossed zero on the grid (last K = " +
                     std::to_string(lo_gap) + ")");
      }
      hi_gap = gap(hi);
    }
  }

  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-10 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace unicr
