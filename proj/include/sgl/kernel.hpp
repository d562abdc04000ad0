#pragma once

#include <optional>
#include <vector>

#include "sgl/dataset.hpp"

namespace sgl {

struct KernelConfig {
  double epsilon = 1.0;  // Gaussian width of exp(-dist^2/epsilon)
  int K = 256;           // angular quadrature size
  int m_max = -1;        // Fourier blocks for m = -m_max..m_max; -1: layout M
  bool debias = false;   // zero the diagonal of the angular affinity
  bool density_normalize = false;
  std::optional<double> sparsify_threshold;  // zero affinities below this

  int resolved_m_max(const AngularLayout& layout) const {
    return m_max < 0 ? layout.M : m_max;
  }
};

/// The Fourier blocks of the steerable affinity operator together with the
/// degree vector. Block m holds the m-th angular Fourier coefficient matrix of
/// the pairwise affinity between all rotations of all points; every block is
/// Hermitian and block -m is the entrywise conjugate of block m. Degrees are
/// the row sums of block 0 and are strictly positive.
struct FourierAffinity {
  int M = 0;                   // block range
  std::vector<Matrix> blocks;  // 2M+1 matrices N x N, index m + M
  RealVector degrees;
  RealVector prenorm_degrees;  // degrees before density normalization (else empty)
  KernelConfig config;
  bool density_normalized = false;

  int n() const { return static_cast<int>(degrees.size()); }
  const Matrix& block(int m) const { return blocks[static_cast<std::size_t>(m + M)]; }
  Matrix& block(int m) { return blocks[static_cast<std::size_t>(m + M)]; }
};

/// Phase tables for the K-point angle grid of one layout: turns per-pair
/// cross-correlations into squared rotational distances and per-pair affinity
/// samples into angular Fourier coefficients. Read-only after construction.
class RotationGrid {
 public:
  RotationGrid(const AngularLayout& layout, int K, int m_max);

  int K() const { return K_; }
  int m_max() const { return m_max_; }
  const AngularLayout& layout() const { return layout_; }

  /// c[m+M] = sum_l x_i(m,l) conj(x_j(m,l)).
  void cross_correlation(const ConstRowRef& xi, const ConstRowRef& xj, Vector& c) const;

  /// dist[k] = ||x_i - x_j^{2 pi k/K}||^2 from the correlations and the two
  /// squared norms; clamped at zero.
  void distances(double norm_i, double norm_j, const Vector& c, Eigen::ArrayXd& dist) const;

  /// bins[m+m_max] = (2 pi / K) sum_k w[k] e^{i 2 pi m k / K}.
  void fourier_bins(const Eigen::ArrayXd& w, Vector& bins) const;

 private:
  AngularLayout layout_;
  int K_;
  int m_max_;
  int half_ = 0;                 // folded index range 1..half_
  Eigen::MatrixXcd dist_phase_;  // K x (2*layout.M+1): e^{-i 2 pi m k / K}
  Eigen::MatrixXd bin_cos_;      // (m_max+1) x (half_+1[+1]), scaled by 2 pi / K
  Eigen::MatrixXd bin_sin_;      // (m_max+1) x half_
};

/// Fills the K-vector of affinities exp(-dist/epsilon) between x_i and the
/// rotations of x_j, applying the sparsification threshold if present.
void affinity_samples(const RotationGrid& grid, const KernelConfig& config, double norm_i,
                      double norm_j, const Vector& c, Eigen::ArrayXd& w, Eigen::ArrayXd& dist);

/// All pairwise per-m cross-correlations; entry c[m+M](i, j). Quadratic memory,
/// intended for small instances and oracles.
std::vector<Matrix> cross_correlations(const SteerableDataset& ds);

/// Squared distances between x_i and the K rotations of x_j, evaluated from a
/// zero-padded inverse transform of the cross-correlation sequence.
Eigen::ArrayXd rotational_distances(const std::vector<Matrix>& c, int i, int j, int K);
Eigen::ArrayXd rotational_distances(const SteerableDataset& ds, int i, int j, int K);

/// Builds the Fourier blocks and degrees over the dataset (pairwise loop runs
/// in parallel; each unordered pair is evaluated once and mirrored, so the
/// result is independent of thread count). Throws ConfigError for invalid
/// parameters and NumericalError when a degree underflows (isolated point).
FourierAffinity fourier_blocks(const SteerableDataset& ds, const KernelConfig& config);

/// Rescales every block by 1/(degree_i * degree_j) and recomputes the degrees,
/// keeping the original ones for later kernel re-evaluation. Applying it twice
/// is rejected.
FourierAffinity density_normalize(FourierAffinity fa);

}  // namespace sgl
