#include "unicr/pdf_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "unicr/errors.hpp"

namespace unicr {
namespace {

double get_param(const NoisePdf& pdf, const std::string& name) {
  if (name == "alpha") return pdf.alpha;
  if (name == "beta") return pdf.beta;
  throw OutOfRange("unknown hyper-parameter '" + name + "' (expected alpha or beta)");
}

void set_param(NoisePdf& pdf, const std::string& name, double value) {
  if (name == "alpha") {
    pdf.alpha = value;
  } else {
    pdf.beta = value;
  }
}

std::vector<double> grid_values(double lo, double hi, double step) {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

}  // namespace

void HyperParamSpace::validate() const {
  if (names.empty()) throw OutOfRange("hyper-parameter space must name at least one parameter");
  if (names.size() != lows.size() || names.size() != highs.size() || names.size() != steps.size()) {
    throw OutOfRange("hyper-parameter space arrays must have equal length");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != "alpha" && names[i] != "beta") {
      throw OutOfRange("unknown hyper-parameter '" + names[i] + "'");
    }
    if (!(lows[i] < highs[i])) throw OutOfRange("hyper-parameter lows must be < highs");
    if (!(steps[i] > 0.0)) throw OutOfRange("hyper-parameter steps must be > 0");
    if (names[i] == "alpha" && lows[i] <= 0.0) {
      throw OutOfRange("alpha must stay positive throughout the search");
    }
  }
}

CoptResult c_opt_grid(const NoisePdf& base, const HyperParamSpace& space,
                      const RadiusEvaluator& evaluator, std::span<const double> sigma_set) {
  space.validate();
  const bool has_alpha =
      std::find(space.names.begin(), space.names.end(), "alpha") != space.names.end();
  if (!sigma_set.empty() && has_alpha) {
    throw OutOfRange("c_opt_grid: alpha is derived from sigma; drop it from the grid");
  }

  std::vector<double> beta_values{base.beta};
  std::vector<double> alpha_values{base.alpha};
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    auto values = grid_values(space.lows[i], space.highs[i], space.steps[i]);
    if (space.names[i] == "beta") {
      beta_values = std::move(values);
    } else {
      alpha_values = std::move(values);
    }
  }

  CoptResult result;
  bool have_best = false;
  auto consider = [&](const CoptRow& row, const NoisePdf& pdf) {
    if (!row.score) return;
    const bool better =
        !have_best || *row.score > result.best_score ||
        (*row.score == result.best_score &&
         (row.beta < result.best_pdf.beta ||
          (row.beta == result.best_pdf.beta && row.alpha < result.best_pdf.alpha)));
    if (better) {
      have_best = true;
      result.best_pdf = pdf;
      result.best_score = *row.score;
    }
  };

  for (double beta : beta_values) {
    if (!sigma_set.empty()) {
      for (double sigma : sigma_set) {
        CoptRow row;
        row.beta = beta;
        row.sigma = sigma;
        NoisePdf pdf = base;
        pdf.beta = beta;
        try {
          pdf.alpha = normalize_scale(base.family, beta, sigma);
          row.alpha = pdf.alpha;
          pdf.validate();
          row.score = evaluator(pdf);
        } catch (const std::exception&) {
          row.score.reset();
        }
        consider(row, pdf);
        result.table.push_back(row);
      }
    } else {
      for (double alpha : alpha_values) {
        CoptRow row;
        row.beta = beta;
        row.alpha = alpha;
        row.sigma = std::numeric_limits<double>::quiet_NaN();
        NoisePdf pdf = base;
        pdf.beta = beta;
        pdf.alpha = alpha;
        try {
          pdf.validate();
          row.score = evaluator(pdf);
        } catch (const std::exception&) {
          row.score.reset();
        }
        consider(row, pdf);
        result.table.push_back(row);
      }
    }
  }

  if (!have_best) throw NoFeasibleCell("c_opt_grid: every grid cell failed to evaluate");
  return result;
}

IOptResult i_opt_hill_climb(const NoisePdf& initial, const HyperParamSpace& space,
                            const RadiusEvaluator& evaluator,
                            const std::function<bool(const NoisePdf&)>& consistency_check) {
  space.validate();
  initial.validate();
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    const double v = get_param(initial, space.names[i]);
    if (v < space.lows[i] || v > space.highs[i]) {
      throw OutOfRange("i_opt_hill_climb: initial '" + space.names[i] + "' outside [L, H]");
    }
  }

  IOptResult result;
  result.best_pdf = initial;
  const std::optional<double> r0 = evaluator(initial);
  result.best_value = r0 ? *r0 : -std::numeric_limits<double>::infinity();

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      for (double sign : {+1.0, -1.0}) {
        const double candidate_value =
            get_param(result.best_pdf, space.names[i]) + sign * space.steps[i];
        if (!(space.lows[i] < candidate_value && candidate_value < space.highs[i])) continue;
        NoisePdf candidate = result.best_pdf;
        set_param(candidate, space.names[i], candidate_value);
        try {
          candidate.validate();
        } catch (const InvalidPdf&) {
          continue;
        }
        if (consistency_check && !consistency_check(candidate)) continue;
        const std::optional<double> value = evaluator(candidate);
        if (!value || !(*value > result.best_value)) continue;
        result.best_pdf = candidate;
        result.best_value = *value;
        result.trace.push_back(IOptStep{space.names[i], candidate, *value});
        improved = true;
        break;  // first strict improvement per parameter, then move on
      }
    }
  }
  return result;
}

}  // namespace unicr
