#pragma once

#include "unicr/noise_pdf.hpp"

namespace unicr {

/// Closed-form Gaussian l2 radius: sigma/2 * (Phi^-1(p_a) - Phi^-1(p_b)).
/// Binary-case callers pass p_b = 1 - p_a. Throws OutOfRange for
/// probabilities at {0,1}.
double cohen_gaussian_l2(double sigma, double p_a, double p_b);

/// Analytic binary-case gap for Gaussian noise:
/// Phi(Phi^-1(p_a) - lambda_times_norm / sigma) - 1/2.
double gaussian_gap_closed_form(double sigma, double p_a, double lambda_times_norm);

/// Brute-force boundary distance for an axis-aligned shift, binary case.
/// Both ratio CDFs are computed from the normalized per-coordinate density by
/// dense numerical integration in CDF space (grid plus switch-point
/// refinement, absolute error well below 1e-8); K is scanned on a grid of
/// shifts with step shift_grid_resolution and the sign change is refined by
/// bisection. This is the per-axis boundary distance: an upper bound on the
/// lp radius for finite p and, for the symmetric catalog densities, the
/// empirical minimizer. Throws NoRoot when K never crosses zero on the grid.
double one_d_boundary_oracle(const NoisePdf& pdf, double p_a, double shift_grid_resolution);

}  // namespace unicr
