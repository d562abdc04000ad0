#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sgl/dataset.hpp"
#include "sgl/kernel.hpp"

namespace sgl::testing {

inline SteerableDataset random_dataset(int N, const AngularLayout& layout, std::uint64_t seed,
                                       double scale = 1.0) {
  SteerableDataset ds;
  ds.layout = layout;
  ds.values.resize(N, layout.D);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, scale);
  for (int i = 0; i < N; ++i)
    for (int c = 0; c < layout.D; ++c) ds.values(i, c) = Complex(gauss(rng), gauss(rng));
  return ds;
}

inline AngularLayout random_layout(std::uint64_t seed, int max_M = 3, int max_ell = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(0, max_M);
  std::uniform_int_distribution<int> ell_dist(0, max_ell);
  const int M = m_dist(rng);
  std::vector<int> counts(static_cast<std::size_t>(2 * M + 1));
  int total = 0;
  for (auto& count : counts) {
    count = ell_dist(rng);
    total += count;
  }
  if (total == 0) counts[static_cast<std::size_t>(M)] = 1;  // keep at least one column
  return AngularLayout::from_counts(M, std::move(counts));
}

inline std::vector<double> random_angles(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  std::vector<double> phis(static_cast<std::size_t>(N));
  for (auto& phi : phis) phi = uni(rng);
  return phis;
}

// Brute-force oracle: rotate the row, take the norm, no transform tricks.
inline Eigen::ArrayXd brute_force_distances(const SteerableDataset& ds, int i, int j, int K) {
  Eigen::ArrayXd dist(K);
  for (int k = 0; k < K; ++k) {
    RowVec rotated = rotate_point(ds.values.row(j), ds.layout, 2.0 * M_PI * k / K);
    dist(k) = (ds.values.row(i) - rotated).squaredNorm();
  }
  return dist;
}

// Naive summation oracle for the per-m cross-correlations.
inline Complex naive_cross_correlation(const SteerableDataset& ds, int i, int j, int m) {
  Complex acc = 0.0;
  for (int l = 0; l < ds.layout.count(m); ++l)
    acc += ds.values(i, ds.layout.column(m, l)) * std::conj(ds.values(j, ds.layout.column(m, l)));
  return acc;
}

// Naive transform oracle: brute-force distances, explicit complex exponential
// sum, no phase tables and no mirroring.
inline Complex naive_fourier_block_entry(const SteerableDataset& ds, const KernelConfig& config,
                                         int i, int j, int m) {
  const int K = config.K;
  Eigen::ArrayXd dist = brute_force_distances(ds, i, j, K);
  Complex acc = 0.0;
  for (int k = 0; k < K; ++k) {
    double w = std::exp(-dist(k) / config.epsilon);
    if (config.sparsify_threshold && w < *config.sparsify_threshold) w = 0.0;
    if (config.debias && i == j) w = 0.0;
    acc += w * std::polar(1.0, m * 2.0 * M_PI * k / K);
  }
  return 2.0 * M_PI / K * acc;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace sgl::testing
