#pragma once

#include <cstdint>
#include <vector>

#include "sgl/dataset.hpp"

namespace sgl {

struct XvalConfig {
  double split_fraction = 0.8;  // share of rows used for denoising
  std::vector<double> eps_grid;
  std::vector<double> lambda_grid;
  int K = 256;
  double sigma2 = 0.0;  // known or estimated noise variance
  std::uint64_t seed = 0;
  bool debias = true;
  bool density_normalize = false;
};

/// Width rule of thumb sqrt(D) * sigma2, used to center epsilon grids when the
/// noise dominates the pairwise distances.
double eps_rule_of_thumb(int D_total, double sigma2);

/// Held-out log-likelihood of the noisy points given the denoised ones,
/// marginalized over all grid rotations of the denoised set:
/// sum_i log [ sum_j (2 pi / K) sum_k exp(-||y_i - x_j^{2 pi k/K}||^2 / 2 sigma2) ],
/// evaluated with log-sum-exp stabilization.
double empirical_log_likelihood(const SteerableDataset& heldout,
                                const SteerableDataset& denoised, double sigma2, int K);

struct XvalCell {
  double epsilon = 0.0;
  double lambda_c = 0.0;
  double J = 0.0;
};

struct XvalResult {
  double eps_opt = 0.0;
  double lambda_opt = 0.0;
  double J_opt = 0.0;
  std::vector<XvalCell> table;  // epsilon-major, lambda-minor
};

/// Splits the noisy rows by the seeded shuffle, denoises the first split for
/// every (epsilon, lambda_c) cell through the kernel/harmonics/filter
/// pipeline, scores the held-out split, and returns the argmax with the full
/// table. Pipeline failures score the cell at -infinity.
XvalResult grid_search(const SteerableDataset& noisy, const XvalConfig& config);

}  // namespace sgl
