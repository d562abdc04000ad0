#pragma once

#include <cstdint>
#include <vector>

#include "sgl/apply.hpp"

namespace sgl {

/// Errors of the steerable and standard pointwise Laplacian estimates on the
/// unit-sphere benchmark, averaged over trials, plus log-log slopes fitted
/// over each estimator's variance-dominated region (the grid points strictly
/// left of its own empirical error minimum). region_split records the index
/// of the steerable estimator's minimum.
struct ConvergenceReport {
  std::vector<double> epsilons;
  std::vector<double> errors_steerable;
  std::vector<double> errors_standard;
  double slope_steerable = 0.0;
  double slope_standard = 0.0;
  int region_split = 0;
};

/// Default grid: half-octave steps over 2^-4 .. 2^2.
std::vector<double> default_epsilon_grid();

/// Runs `trials` fresh sphere samples of size N with the designated test point
/// prepended at index 0, estimates its surface Laplacian (-2) with both
/// estimators over the epsilon grid, and fits the variance-region slopes.
/// Trials run in parallel; trial t draws its RNG stream from (seed, t).
ConvergenceReport convergence_experiment(int N, int K, std::vector<double> eps_grid, int trials,
                                         std::uint64_t seed);

struct NoiseRobustnessRow {
  int D = 0;
  double sigma2 = 0.0;
  double err_noisy = 0.0;
  double err_clean = 0.0;
};

/// High-dimensional noise benchmark: per ambient dimension D, the sphere data
/// is embedded by a random per-m isometry and perturbed with complex Gaussian
/// noise of variance gamma / D, the kernel is debiased, and the error of the
/// Laplacian estimate at the clean test point is compared against the same
/// debiased estimate on clean data.
std::vector<NoiseRobustnessRow> noise_robustness_experiment(int N, double gamma,
                                                            const std::vector<int>& D_grid,
                                                            double epsilon, std::uint64_t seed,
                                                            int trials = 1, int K = 256);

/// Derives an independent RNG stream from a base seed and an index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sgl
