#include "unicr/noise_pdf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "unicr/errors.hpp"
#include "unicr/special_functions.hpp"

namespace unicr {
namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kSqrtPi = 1.7724538509055160;

// Marsaglia-Tsang gamma sampler; the shape < 1 case is boosted through
// shape + 1 and a power of a uniform.
double gamma_draw(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = rng.uniform01();
    return gamma_draw(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double signed_magnitude(double magnitude, Rng& rng) {
  return rng.uniform01() < 0.5 ? -magnitude : magnitude;
}

// Magnitude draw from density proportional to exp(-b t - c t^2) on t >= 0
// with b, c >= 0, b + c > 0. Envelope choice keeps the acceptance rate
// bounded away from zero across the whole mixture range.
double exp_mix_magnitude(double b, double c, Rng& rng) {
  if (c <= 0.0) return -std::log(rng.uniform01()) / b;
  if (b <= 0.0) return std::fabs(rng.normal()) / std::sqrt(2.0 * c);
  if (b * b >= c) {
    for (;;) {
      const double t = -std::log(rng.uniform01()) / b;
      if (rng.uniform01() < std::exp(-c * t * t)) return t;
    }
  }
  for (;;) {
    const double t = std::fabs(rng.normal()) / std::sqrt(2.0 * c);
    if (rng.uniform01() < std::exp(-b * t)) return t;
  }
}

// Weight of the Laplace component when the mixture kernel
// b e^{-t} + (1-b) e^{-t^2} is normalized.
double lg_mix_laplace_weight(double beta) {
  return 2.0 * beta / (2.0 * beta + (1.0 - beta) * kSqrtPi);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::Gaussian: return "gaussian";
    case Family::Laplace: return "laplace";
    case Family::HyperbolicSecant: return "sech";
    case Family::GeneralNormal: return "general_normal";
    case Family::Cauchy: return "cauchy";
    case Family::Pareto: return "pareto";
    case Family::LaplaceGaussianMix: return "lg_mix";
    case Family::ExponentialMix: return "exp_mix";
  }
  return "?";
}

Family family_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "gaussian") return Family::Gaussian;
  if (n == "laplace") return Family::Laplace;
  if (n == "sech") return Family::HyperbolicSecant;
  if (n == "general_normal") return Family::GeneralNormal;
  if (n == "cauchy") return Family::Cauchy;
  if (n == "pareto") return Family::Pareto;
  if (n == "lg_mix") return Family::LaplaceGaussianMix;
  if (n == "exp_mix") return Family::ExponentialMix;
  throw InvalidPdf("unknown noise family: " + std::string(name));
}

bool family_uses_beta(Family family) {
  switch (family) {
    case Family::GeneralNormal:
    case Family::Pareto:
    case Family::LaplaceGaussianMix:
    case Family::ExponentialMix:
      return true;
    default:
      return false;
  }
}

void NoisePdf::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidPdf("alpha must be positive and finite");
  }
  if (dim < 1) throw InvalidPdf("dim must be >= 1");
  if (!family_uses_beta(family)) return;
  if (!std::isfinite(beta)) throw InvalidPdf("beta must be finite");
  switch (family) {
    case Family::GeneralNormal:
      if (!(beta > 0.0)) throw InvalidPdf("general_normal requires beta > 0");
      break;
    case Family::Pareto:
      if (!(beta > 0.0)) throw InvalidPdf("pareto requires beta > 0 for an integrable density");
      break;
    case Family::LaplaceGaussianMix:
      if (beta < 0.0 || beta > 1.0) throw InvalidPdf("lg_mix requires beta in [0,1]");
      break;
    case Family::ExponentialMix:
      if (beta < 0.0 || beta > 1.0) {
        throw InvalidPdf("exp_mix requires beta in [0,1] (beta > 1 makes the density blow up)");
      }
      break;
    default:
      break;
  }
}

double log_density_unnormalized(const NoisePdf& pdf, double z) {
  const double t = std::fabs(z / pdf.alpha);
  switch (pdf.family) {
    case Family::Gaussian:
      return -t * t;
    case Family::Laplace:
      return -t;
    case Family::HyperbolicSecant:
      // log sech(t) = -t - log1p(e^{-2t}) + log 2; the constant is dropped.
      return -t - std::log1p(std::exp(-2.0 * t));
    case Family::GeneralNormal:
      return -std::pow(t, pdf.beta);
    case Family::Cauchy:
      return -std::log1p(t * t);
    case Family::Pareto:
      return -(pdf.beta + 1.0) * std::log1p(t);
    case Family::LaplaceGaussianMix: {
      if (pdf.beta >= 1.0) return -t;
      if (pdf.beta <= 0.0) return -t * t;
      const double a = -t;
      const double b = -t * t;
      const double m = std::max(a, b);
      return m + std::log(pdf.beta * std::exp(a - m) + (1.0 - pdf.beta) * std::exp(b - m));
    }
    case Family::ExponentialMix:
      return -pdf.beta * t - (1.0 - pdf.beta) * t * t;
  }
  return 0.0;
}

double sample_coordinate(const NoisePdf& pdf, Rng& rng) {
  const double a = pdf.alpha;
  switch (pdf.family) {
    case Family::Gaussian:
      return a / std::sqrt(2.0) * rng.normal();
    case Family::Laplace: {
      const double u = rng.uniform01();
      return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
    }
    case Family::HyperbolicSecant:
      // CDF of sech(t)/pi is (2/pi) atan(e^t).
      return a * std::log(std::tan(0.5 * kPi * rng.uniform01()));
    case Family::GeneralNormal:
      // |x/a|^beta ~ Gamma(1/beta).
      return signed_magnitude(a * std::pow(gamma_draw(1.0 / pdf.beta, rng), 1.0 / pdf.beta), rng);
    case Family::Cauchy:
      return a * std::tan(kPi * (rng.uniform01() - 0.5));
    case Family::Pareto:
      return signed_magnitude(a * (std::pow(1.0 - rng.uniform01(), -1.0 / pdf.beta) - 1.0), rng);
    case Family::LaplaceGaussianMix: {
      const double w_l = lg_mix_laplace_weight(pdf.beta);
      if (rng.uniform01() < w_l) {
        const double u = rng.uniform01();
        return u < 0.5 ? a * std::log(2.0 * u) : -a * std::log(2.0 * (1.0 - u));
      }
      return a / std::sqrt(2.0) * rng.normal();
    }
    case Family::ExponentialMix:
      return signed_magnitude(a * exp_mix_magnitude(pdf.beta, 1.0 - pdf.beta, rng), rng);
  }
  return 0.0;
}

NoiseMatrix sample(const NoisePdf& pdf, std::size_t n, std::uint64_t seed) {
  pdf.validate();
  if (n < 1) throw OutOfRange("sample: n must be >= 1");
  NoiseMatrix m;
  m.rows = n;
  m.cols = static_cast<std::size_t>(pdf.dim);
  m.seed = seed;
  m.pdf = pdf;
  m.values.resize(m.rows * m.cols);
  double* data = m.values.data();
  const std::size_t cols = m.cols;
  run_chunked(n, seed, [&pdf, data, cols](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t r = begin; r < end; ++r) {
      double* row = data + r * cols;
      for (std::size_t c = 0; c < cols; ++c) row[c] = sample_coordinate(pdf, rng);
    }
  });
  return m;
}

double second_moment_unit_scale(Family family, double beta) {
  switch (family) {
    case Family::Gaussian:
      return 0.5;
    case Family::Laplace:
      return 2.0;
    case Family::HyperbolicSecant:
      return kPi * kPi / 4.0;
    case Family::GeneralNormal:
      if (!(beta > 0.0)) throw InvalidPdf("general_normal requires beta > 0");
      return std::exp(std::lgamma(3.0 / beta) - std::lgamma(1.0 / beta));
    case Family::Cauchy:
      throw InfiniteVariance("cauchy has no finite second moment");
    case Family::Pareto:
      if (!(beta > 2.0)) {
        throw InfiniteVariance("pareto requires beta > 2 for a finite second moment");
      }
      return 2.0 / ((beta - 1.0) * (beta - 2.0));
    case Family::LaplaceGaussianMix: {
      const double w_l = lg_mix_laplace_weight(beta);
      return w_l * 2.0 + (1.0 - w_l) * 0.5;
    }
    case Family::ExponentialMix: {
      const double b = beta;
      const double c = 1.0 - beta;
      if (c <= 1e-12) return 2.0;
      if (b <= 1e-12) return 0.5;
      // J_k = int_0^inf t^k exp(-b t - c t^2) dt obeys
      // b J_0 + 2 c J_1 = 1 and b J_1 + 2 c J_2 = J_0.
      const double u = b / (2.0 * std::sqrt(c));
      const double j0 = 0.5 * std::sqrt(kPi / c) * erfcx_positive(u);
      const double j1 = (1.0 - b * j0) / (2.0 * c);
      const double j2 = (j0 - b * j1) / (2.0 * c);
      return j2 / j0;
    }
  }
  return 0.0;
}

double normalize_scale(Family family, double beta, double target_sigma) {
  if (!(target_sigma > 0.0)) throw OutOfRange("normalize_scale: target_sigma must be > 0");
  return target_sigma / std::sqrt(second_moment_unit_scale(family, beta));
}

double sigma_equivalent_or_alpha(const NoisePdf& pdf) {
  try {
    return pdf.alpha * std::sqrt(second_moment_unit_scale(pdf.family, pdf.beta));
  } catch (const InfiniteVariance&) {
    return pdf.alpha;
  }
}

NoisePdf parse_pdf_spec(std::string_view spec) {
  NoisePdf pdf;
  bool have_family = false;
  std::istringstream in{std::string(spec)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= token.size()) {
      throw InvalidPdf("pdf spec token is not key=value: '" + token + "'");
    }
    const std::string key = lower(token.substr(0, eq));
    const std::string value = token.substr(eq + 1);
    auto numeric = [&key, &value]() -> double {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size()) {
        throw InvalidPdf("bad value for pdf spec key '" + key + "': '" + value + "'");
      }
      return v;
    };
    if (key == "family") {
      pdf.family = family_from_name(value);
      have_family = true;
    } else if (key == "alpha") {
      pdf.alpha = numeric();
    } else if (key == "beta") {
      pdf.beta = numeric();
    } else if (key == "dim") {
      pdf.dim = static_cast<int>(numeric());
    } else {
      throw InvalidPdf("unknown pdf spec key: '" + key + "'");
    }
  }
  if (!have_family) throw InvalidPdf("pdf spec must name a family");
  pdf.validate();
  return pdf;
}

std::string to_spec_string(const NoisePdf& pdf) {
  std::ostringstream out;
  out << "family=" << family_name(pdf.family) << " alpha=" << pdf.alpha;
  if (family_uses_beta(pdf.family)) out << " beta=" << pdf.beta;
  out << " dim=" << pdf.dim;
  return out.str();
}

}  // namespace unicr
