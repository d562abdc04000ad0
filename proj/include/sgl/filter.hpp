#pragma once

#include <vector>

#include "sgl/harmonics.hpp"

namespace sgl {

/// Output of the rotation-equivariant low-pass filter: per-m coefficient
/// blocks B, the filtered dataset, and per-m diagnostics. The filtered block
/// for angular index m lies in the span of the first k_m harmonics, and a
/// zero retained count produces a zero block.
struct FilterResult {
  TruncationPlan plan;
  std::vector<Matrix> B;          // index m + layout.M, shape k_m x ell_m
  SteerableDataset filtered;
  std::vector<double> residuals;  // ||X^(m) - V^(m) B^(m)||_F per data block
  std::vector<int> ranks;         // retained count actually used per data block
  std::vector<int> rank_deficient_m;  // angular indices solved in the minimum-norm sense
  bool degenerate_cutoff = false;     // lambda_c falls inside an eigenvalue cluster
};

/// Least-squares coefficients min_B ||X - V B||_F via a QR factorization of V,
/// factored once and applied to every column of X. Rank-deficient V is solved
/// in the minimum-norm sense and reported through the optional flag.
Matrix solve_block(const Matrix& X_m, const Matrix& V_m, bool* rank_deficient = nullptr);

/// Hermitian idempotent projector onto span(V_m); rank reported if requested.
Matrix projection_matrix(const Matrix& V_m, int* rank = nullptr);

/// Filters every angular block of the dataset against the harmonics retained
/// below lambda_c. The basis may come from a reference dataset with the same
/// layout and row count (clean harmonics applied to noisy data). Real-flagged
/// datasets solve only m >= 0 and conjugate-mirror the negative blocks.
FilterResult filter_dataset(const SteerableDataset& ds, const HarmonicBasis& basis,
                            double lambda_c);

struct VarianceEstimate {
  double value = 0.0;  // sigma2 * sum_m k_m ell_m / N
  double bound = 0.0;  // max_m k_m * (D sigma2) / N
};

/// Expected per-point filtered-noise energy and its uniform bound.
VarianceEstimate variance_estimate(const TruncationPlan& plan, const AngularLayout& layout,
                                   double sigma2, int N);

struct ErrorReport {
  double bias = 0.0;      // (1/N) ||X_clean - X_hat||_F^2
  double variance = 0.0;  // (1/N) ||X_hat - X_tilde||_F^2
  double total = 0.0;     // (1/N) ||X_clean - X_tilde||_F^2
};

ErrorReport error_report(const SteerableDataset& clean, const SteerableDataset& hat,
                         const SteerableDataset& tilde);

}  // namespace sgl
