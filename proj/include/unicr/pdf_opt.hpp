#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unicr/noise_pdf.hpp"

namespace unicr {

/// Search box over a subset of {alpha, beta}: componentwise lows < highs,
/// positive steps.
struct HyperParamSpace {
  std::vector<std::string> names;
  std::vector<double> lows;
  std::vector<double> highs;
  std::vector<double> steps;

  void validate() const;
};

/// Scoring callable: certified radius for I-OPT, robustness score for C-OPT.
/// An empty optional marks a failed evaluation (missing grid cell, rejected
/// probe). Must be deterministic given its internal seed configuration.
using RadiusEvaluator = std::function<std::optional<double>(const NoisePdf&)>;

struct CoptRow {
  double beta = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;  // NaN when the cell used an explicit alpha grid
  std::optional<double> score;
};

struct CoptResult {
  NoisePdf best_pdf;
  double best_score = 0.0;
  std::vector<CoptRow> table;
};

/// Exhaustive grid search. With a non-empty sigma_set the alpha of every cell
/// is re-normalized per sigma via normalize_scale (the space must then not
/// name "alpha"); otherwise the grid runs over the named parameters directly.
/// Ties break toward the smallest beta, then alpha, then sigma. Throws
/// NoFeasibleCell when every cell fails.
CoptResult c_opt_grid(const NoisePdf& base, const HyperParamSpace& space,
                      const RadiusEvaluator& evaluator, std::span<const double> sigma_set);

struct IOptStep {
  std::string name;    // parameter that moved
  NoisePdf pdf;        // parameters after the accepted step
  double value = 0.0;  // evaluator value after the step
};

struct IOptResult {
  NoisePdf best_pdf;
  double best_value = 0.0;
  std::vector<IOptStep> trace;
};

/// Hill climbing over the named hyper-parameters: probe +step then -step
/// (strictly inside the bounds), accept the first strict improvement, and
/// repeat full parameter sweeps until one completes with no improvement.
/// When a consistency check is supplied a probe is only accepted if the check
/// passes. Never fails: the worst case returns the initial pdf.
IOptResult i_opt_hill_climb(const NoisePdf& initial, const HyperParamSpace& space,
                            const RadiusEvaluator& evaluator,
                            const std::function<bool(const NoisePdf&)>& consistency_check = {});

}  // namespace unicr
