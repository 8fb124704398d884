#include "unicr/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unicr/errors.hpp"

namespace unicr {
namespace {

constexpr double kInitialLambda = 0.05;

std::uint64_t hash_direction(std::span<const double> dir) {
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  for (double v : dir) h = mix_seed(h, hash_double(v));
  return h;
}

std::vector<double> normalized_l2(std::span<const double> v) {
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw OutOfRange("direction must be finite and non-zero");
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= nrm;
  return out;
}

}  // namespace

void ScalarSearchConfig::validate() const {
  if (!(k_tolerance > 0.0 && k_tolerance < 0.5)) {
    throw OutOfRange("k_tolerance must lie in (0, 0.5)");
  }
  if (max_iterations < 1) throw OutOfRange("max_iterations must be >= 1");
  if (n_samples < 100) throw OutOfRange("n_samples must be >= 100");
}

double ScalarSearchConfig::effective_lambda_max(const NoisePdf& pdf) const {
  if (lambda_max > 0.0) return lambda_max;
  return 50.0 * sigma_equivalent_or_alpha(pdf);
}

void PsoConfig::validate() const {
  if (particles < 1) throw OutOfRange("particles must be >= 1");
  if (iterations < 1) throw OutOfRange("iterations must be >= 1");
  if (!(init_magnitude > 0.0)) throw OutOfRange("init_magnitude must be > 0");
}

const char* status_name(CertifyStatus status) {
  switch (status) {
    case CertifyStatus::Certified: return "certified";
    case CertifyStatus::NoBoundaryCrossing: return "no_boundary_crossing";
    case CertifyStatus::Abstain: return "abstain";
  }
  return "?";
}

double lp_norm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  if (!(p > 0.0)) throw OutOfRange("lp_norm: p must be > 0 or infinity");
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

ScalarOutcome scalar_optimize(const NoisePdf& pdf, std::span<const double> direction,
                              const ProbabilityBounds& bounds, const ScalarSearchConfig& cfg,
                              bool binary) {
  pdf.validate();
  cfg.validate();
  const std::vector<double> dir = normalized_l2(direction);
  const double lambda_cap = cfg.effective_lambda_max(pdf);
  const std::uint64_t dir_hash = hash_direction(dir);

  ScalarOutcome out;
  // One trial: fresh forward pass -> thresholds -> gap with a disjoint
  // seed stream derived from (base_seed, lambda bits, direction hash).
  auto gap_at = [&](double lambda) -> BoundaryGap {
    const std::uint64_t fwd_seed =
        derive_seed(cfg.base_seed, dir_hash, hash_double(lambda), 0x0f0ULL);
    const std::uint64_t rev_seed =
        derive_seed(cfg.base_seed, dir_hash, hash_double(lambda), 0x0f1ULL);
    const EmpiricalCdf cdf = forward_ratio_cdf(pdf, dir, lambda, cfg.n_samples, fwd_seed);
    const AuxiliaryThresholds thr = compute_thresholds(cdf, bounds);
    return boundary_gap(pdf, dir, lambda, thr, cfg.n_samples, rev_seed, binary);
  };

  double lambda_a = std::min(kInitialLambda, lambda_cap);
  BoundaryGap gap = gap_at(lambda_a);
  if (gap.k < 0.0) {
    // The boundary (if any) lies below the smallest scale the ladder can
    // resolve; report it as not crossed unless this point already sits on
    // the boundary within tolerance.
    if (std::fabs(gap.k) <= cfg.k_tolerance) {
      out.crossed = true;
      out.lambda = lambda_a;
      out.gap = gap;
      out.bracket_lo = out.bracket_hi = lambda_a;
    }
    return out;
  }

  double lambda_b = lambda_a;
  BoundaryGap gap_b = gap;
  while (gap_b.k >= 0.0) {
    if (lambda_b >= lambda_cap) return out;  // never crossed up to the cap
    lambda_a = lambda_b;
    lambda_b = std::min(2.0 * lambda_b, lambda_cap);
    gap_b = gap_at(lambda_b);
  }

  out.crossed = true;
  out.initial_bracket_width = lambda_b - lambda_a;

  double lambda = 0.5 * (lambda_a + lambda_b);
  gap = gap_at(lambda);
  int iterations = 0;
  while (iterations < cfg.max_iterations && std::fabs(gap.k) > cfg.k_tolerance) {
    if (gap.k > 0.0) {
      lambda_a = lambda;
    } else {
      lambda_b = lambda;
    }
    lambda = 0.5 * (lambda_a + lambda_b);
    gap = gap_at(lambda);
    ++iterations;
  }

  out.lambda = lambda;
  out.gap = gap;
  out.bracket_lo = lambda_a;
  out.bracket_hi = lambda_b;
  out.bisection_iterations = iterations;
  return out;
}

namespace {

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_cost = std::numeric_limits<double>::infinity();
  ScalarOutcome best_outcome;
  std::vector<double> best_direction;
};

std::vector<double> random_unit_direction(int dim, Rng& rng) {
  std::vector<double> v(dim);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (double& x : v) {
      x = rng.normal();
      nrm += x * x;
    }
  } while (nrm < 1e-24);
  nrm = std::sqrt(nrm);
  for (double& x : v) x /= nrm;
  return v;
}

std::vector<std::vector<double>> initial_positions(int dim, int particles, double norm_p, double a,
                                                   Rng& rng) {
  std::vector<std::vector<double>> pos;
  pos.reserve(particles);
  if (std::isinf(norm_p)) {
    // Uniform vector and sign variants for the max norm.
    const int patterned = std::min(particles, 2 + dim);
    for (int k = 0; k < patterned; ++k) {
      std::vector<double> v(dim, a);
      if (k == 1) {
        for (double& x : v) x = -a;
      } else if (k >= 2) {
        for (double& x : v) x = rng.uniform01() < 0.5 ? -a : a;
      }
      pos.push_back(std::move(v));
    }
  } else {
    // One-hot axis vectors, alternating sign across axes.
    const int axis_count = std::min(particles, 2 * dim);
    for (int k = 0; k < axis_count; ++k) {
      std::vector<double> v(dim, 0.0);
      v[k % dim] = (k < dim) ? a : -a;
      pos.push_back(std::move(v));
    }
  }
  while (pos.size() < static_cast<std::size_t>(particles)) {
    std::vector<double> v = random_unit_direction(dim, rng);
    for (double& x : v) x *= a;
    pos.push_back(std::move(v));
  }
  return pos;
}

}  // namespace

RadiusResult certified_radius(const NoisePdf& pdf, const ProbabilityBounds& bounds, double norm_p,
                              const ScalarSearchConfig& scfg, const PsoConfig& pcfg, double alpha0,
                              double dkw_delta) {
  pdf.validate();
  scfg.validate();
  pcfg.validate();
  if (!std::isinf(norm_p) && !(norm_p > 0.0)) {
    throw OutOfRange("certified_radius: norm_p must be > 0 or infinity");
  }

  RadiusResult result;
  result.norm_p = norm_p;
  result.confidence = certification_confidence(scfg.n_samples, dkw_delta, alpha0);

  // Zero probability margin puts the boundary through the origin.
  if (bounds.p_a_lower == bounds.p_b_upper) {
    result.status = CertifyStatus::Certified;
    result.radius = 0.0;
    result.lambda = 0.0;
    result.direction.assign(pdf.dim, 0.0);
    result.direction[0] = 1.0;
    result.gap = BoundaryGap{0.0, scfg.n_samples};
    return result;
  }

  const int dim = pdf.dim;
  Rng init_rng(derive_seed(scfg.base_seed, 0x950ULL));
  std::vector<std::vector<double>> positions =
      initial_positions(dim, pcfg.particles, norm_p, pcfg.init_magnitude, init_rng);

  std::vector<Particle> swarm(pcfg.particles);
  std::vector<Rng> particle_rng;
  particle_rng.reserve(pcfg.particles);
  for (int i = 0; i < pcfg.particles; ++i) {
    swarm[i].position = std::move(positions[i]);
    swarm[i].velocity.assign(dim, 0.0);
    swarm[i].best_position = swarm[i].position;
    particle_rng.emplace_back(derive_seed(scfg.base_seed, 0x951ULL, i));
  }

  auto evaluate = [&](Particle& p) {
    double nrm = 0.0;
    for (double x : p.position) nrm += x * x;
    if (!(nrm > 1e-24) || !std::isfinite(nrm)) return;
    const std::vector<double> dir = normalized_l2(p.position);
    const ScalarOutcome outcome = scalar_optimize(pdf, dir, bounds, scfg, bounds.binary);
    if (!outcome.crossed) return;
    const double cost = outcome.lambda * lp_norm(dir, norm_p);
    if (cost < p.best_cost) {
      p.best_cost = cost;
      p.best_position = p.position;
      p.best_outcome = outcome;
      p.best_direction = dir;
    }
  };

  int g_best = -1;
  auto update_global = [&] {
    for (int i = 0; i < pcfg.particles; ++i) {
      if (g_best < 0 || swarm[i].best_cost < swarm[g_best].best_cost) {
        if (std::isfinite(swarm[i].best_cost)) g_best = i;
      }
    }
  };

  // Particle cost evaluations are independent; state updates happen at the
  // iteration barrier below.
  for (auto& p : swarm) evaluate(p);
  update_global();

  for (int it = 0; it < pcfg.iterations; ++it) {
    const std::vector<double>& attractor =
        g_best >= 0 ? swarm[g_best].best_position : swarm[0].best_position;
    for (int i = 0; i < pcfg.particles; ++i) {
      Particle& p = swarm[i];
      Rng& rng = particle_rng[i];
      for (int d = 0; d < dim; ++d) {
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        p.velocity[d] = pcfg.inertia * p.velocity[d] +
                        pcfg.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                        pcfg.social * r2 * (attractor[d] - p.position[d]);
        p.position[d] += p.velocity[d];
      }
    }
    for (auto& p : swarm) evaluate(p);
    update_global();
  }

  if (g_best < 0) {
    result.status = CertifyStatus::NoBoundaryCrossing;
    return result;
  }
  const Particle& best = swarm[g_best];
  result.status = CertifyStatus::Certified;
  result.radius = best.best_cost;
  result.direction = best.best_direction;
  result.lambda = best.best_outcome.lambda;
  result.gap = best.best_outcome.gap;
  return result;
}

std::vector<std::pair<double, RadiusResult>> radius_vs_p_curve(
    const NoisePdf& pdf, const ProbabilityBounds& bounds, std::span<const double> p_list,
    const ScalarSearchConfig& scfg, const PsoConfig& pcfg) {
  if (p_list.empty()) throw OutOfRange("radius_vs_p_curve: p_list must be non-empty");
  std::vector<std::pair<double, RadiusResult>> out;
  out.reserve(p_list.size());
  for (double p : p_list) {
    out.emplace_back(p, certified_radius(pdf, bounds, p, scfg, pcfg));
  }
  return out;
}

double certification_confidence(std::size_t n, double delta_dkw, double alpha0) {
  if (!(delta_dkw > 0.0 && delta_dkw < 1.0)) {
    throw OutOfRange("certification_confidence: delta must lie in (0,1)");
  }
  if (alpha0 < 0.0 || alpha0 >= 1.0) {
    throw OutOfRange("certification_confidence: alpha0 must lie in [0,1)");
  }
  const double dkw_term = std::max(
      0.0, 1.0 - 2.0 * std::exp(-2.0 * static_cast<double>(n) * delta_dkw * delta_dkw));
  const double conf = (1.0 - alpha0) * (1.0 - alpha0) * std::pow(dkw_term, 4.0);
  return std::clamp(conf, 0.0, 1.0);
}

}  // namespace unicr
