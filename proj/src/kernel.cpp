#include "sgl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgl/errors.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

RotationGrid::RotationGrid(const AngularLayout& layout, int K, int m_max)
    : layout_(layout), K_(K), m_max_(m_max) {
  if (K < 1) throw ConfigError("rotation grid: K must be positive");
  // The tables are built for k <= K/2 and mirrored, so reversing the angle
  // grid (the (i,j) -> (j,i) orientation flip) conjugates every table entry
  // bit-exactly. Together with the folded summation in fourier_bins this makes
  // the blocks independent of the pair orientation, hence exactly Hermitian
  // and exactly permutation-equivariant.
  const int Ml = layout.M;
  dist_phase_.resize(K, 2 * Ml + 1);
  for (int k = 0; k <= K / 2; ++k)
    for (int m = -Ml; m <= Ml; ++m) {
      // k = K/2 maps to itself under grid reversal; its phase must be exactly
      // real so both pair orientations see the same distance there.
      const Complex phase = (2 * k == K)
                                ? Complex(m % 2 == 0 ? 1.0 : -1.0, 0.0)
                                : std::polar(1.0, -m * 2.0 * M_PI * k / K);
      dist_phase_(k, m + Ml) = phase;
      if (k > 0 && k < K - k) dist_phase_(K - k, m + Ml) = std::conj(phase);
    }

  half_ = (K - 1) / 2;             // folded indices 1..half_
  const bool even = K % 2 == 0;
  bin_cos_.resize(m_max + 1, half_ + 1 + (even ? 1 : 0));
  bin_sin_.resize(m_max + 1, std::max(half_, 1));
  bin_sin_.setZero();
  const double scale = 2.0 * M_PI / K;
  for (int m = 0; m <= m_max; ++m) {
    bin_cos_(m, 0) = scale;  // k = 0
    for (int k = 1; k <= half_; ++k) {
      const double angle = m * 2.0 * M_PI * k / K;
      bin_cos_(m, k) = scale * std::cos(angle);
      bin_sin_(m, k - 1) = scale * std::sin(angle);
    }
    if (even) bin_cos_(m, half_ + 1) = (m % 2 == 0 ? scale : -scale);  // k = K/2
  }
}

void RotationGrid::cross_correlation(const ConstRowRef& xi, const ConstRowRef& xj,
                                     Vector& c) const {
  const int Ml = layout_.M;
  c.resize(2 * Ml + 1);
  for (int m = -Ml; m <= Ml; ++m) {
    const int cols = layout_.count(m);
    if (cols == 0) {
      c(m + Ml) = 0.0;
      continue;
    }
    // sum_l x_i(m,l) * conj(x_j(m,l)); Eigen's dot conjugates its left operand.
    c(m + Ml) = xj.segment(layout_.offset(m), cols).dot(xi.segment(layout_.offset(m), cols));
  }
}

void RotationGrid::distances(double norm_i, double norm_j, const Vector& c,
                             Eigen::ArrayXd& dist) const {
  dist = (norm_i + norm_j - 2.0 * (dist_phase_ * c).array().real()).max(0.0);
}

void RotationGrid::fourier_bins(const Eigen::ArrayXd& w, Vector& bins) const {
  bins.resize(2 * m_max_ + 1);
  const bool even = K_ % 2 == 0;
  Eigen::VectorXd folded(half_ + 1 + (even ? 1 : 0));
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(std::max(half_, 1));
  folded(0) = w(0);
  for (int k = 1; k <= half_; ++k) {
    folded(k) = w(k) + w(K_ - k);
    diff(k - 1) = w(k) - w(K_ - k);
  }
  if (even) folded(half_ + 1) = w(K_ / 2);
  Eigen::VectorXd re = bin_cos_ * folded;
  Eigen::VectorXd im = bin_sin_ * diff;
  for (int m = 0; m <= m_max_; ++m) {
    bins(m_max_ + m) = Complex(re(m), im(m));
    bins(m_max_ - m) = Complex(re(m), -im(m));
  }
}

void affinity_samples(const RotationGrid& grid, const KernelConfig& config, double norm_i,
                      double norm_j, const Vector& c, Eigen::ArrayXd& w, Eigen::ArrayXd& dist) {
  grid.distances(norm_i, norm_j, c, dist);
  w = (-dist / config.epsilon).exp();
  if (config.sparsify_threshold)
    w = (w < *config.sparsify_threshold).select(0.0, w);
}

std::vector<Matrix> cross_correlations(const SteerableDataset& ds) {
  const int N = ds.n();
  const int Ml = ds.layout.M;
  std::vector<Matrix> c(2 * Ml + 1, Matrix(N, N));
  RotationGrid grid(ds.layout, 1, 0);
  parallel_for_each(N, [&](std::int64_t i) {
    Vector cij;
    for (int j = 0; j < N; ++j) {
      grid.cross_correlation(ds.values.row(i), ds.values.row(j), cij);
      for (int m = -Ml; m <= Ml; ++m) c[static_cast<std::size_t>(m + Ml)](i, j) = cij(m + Ml);
    }
  });
  return c;
}

Eigen::ArrayXd rotational_distances(const std::vector<Matrix>& c, int i, int j, int K) {
  const int Ml = (static_cast<int>(c.size()) - 1) / 2;
  if (K < 2 * Ml + 1)
    throw ConfigError("rotational distances: K below 2M+1 aliases the correlation sequence");
  double norm_i = 0.0, norm_j = 0.0;
  for (const auto& block : c) {
    norm_i += block(i, i).real();
    norm_j += block(j, j).real();
  }
  Eigen::ArrayXd dist(K);
  for (int k = 0; k < K; ++k) {
    Complex acc = 0.0;
    for (int m = -Ml; m <= Ml; ++m)
      acc += c[static_cast<std::size_t>(m + Ml)](i, j) * std::polar(1.0, -m * 2.0 * M_PI * k / K);
    dist(k) = std::max(0.0, norm_i + norm_j - 2.0 * acc.real());
  }
  return dist;
}

Eigen::ArrayXd rotational_distances(const SteerableDataset& ds, int i, int j, int K) {
  return rotational_distances(cross_correlations(ds), i, j, K);
}

FourierAffinity fourier_blocks(const SteerableDataset& ds, const KernelConfig& config) {
  if (config.epsilon <= 0) throw ConfigError("kernel: epsilon must be positive");
  const int m_max = config.resolved_m_max(ds.layout);
  if (m_max < 0) throw ConfigError("kernel: negative block range");
  const int min_K = 2 * std::max(ds.layout.M, m_max) + 1;
  if (config.K < min_K)
    throw ConfigError("kernel: K=" + std::to_string(config.K) + " is below 2M+1=" +
                      std::to_string(min_K) + "; the angle grid would alias");

  const int N = ds.n();
  FourierAffinity fa;
  fa.M = m_max;
  fa.config = config;
  fa.config.m_max = m_max;
  fa.blocks.assign(static_cast<std::size_t>(2 * m_max + 1), Matrix(N, N));

  RotationGrid grid(ds.layout, config.K, m_max);
  RealVector norms(N);
  for (int i = 0; i < N; ++i) norms(i) = ds.values.row(i).squaredNorm();

  parallel_for_each(N, [&](std::int64_t i) {
    Vector c, bins;
    Eigen::ArrayXd dist, w;
    for (int j = static_cast<int>(i); j < N; ++j) {
      grid.cross_correlation(ds.values.row(i), ds.values.row(j), c);
      affinity_samples(grid, config, norms(i), norms(j), c, w, dist);
      if (config.debias && j == static_cast<int>(i)) w.setZero();
      grid.fourier_bins(w, bins);
      for (int m = 0; m <= m_max; ++m) {
        const Complex v = bins(m_max + m);
        fa.block(m)(i, j) = v;
        fa.block(-m)(i, j) = std::conj(v);
        if (j != static_cast<int>(i)) {
          fa.block(m)(j, i) = std::conj(v);
          fa.block(-m)(j, i) = v;
        }
      }
    }
  });

  // Pin each block to exactly Hermitian so downstream eigensolves see a clean
  // operator no matter how the entries were produced.
  for (auto& block : fa.blocks) block = 0.5 * (block + block.adjoint()).eval();

  fa.degrees = fa.block(0).real().rowwise().sum();
  for (int i = 0; i < N; ++i)
    if (!(fa.degrees(i) > 1e-300))
      throw NumericalError("kernel: point " + std::to_string(i) +
                           " is isolated (degree underflow); increase epsilon");

  if (config.density_normalize) return density_normalize(std::move(fa));
  return fa;
}

FourierAffinity density_normalize(FourierAffinity fa) {
  if (fa.density_normalized)
    throw ConfigError("density normalization already applied to this affinity");
  const int N = fa.n();
  for (int i = 0; i < N; ++i)
    if (!(fa.degrees(i) > 0)) throw NumericalError("density normalization: zero degree");
  RealVector inv = fa.degrees.cwiseInverse();
  for (auto& block : fa.blocks)
    block = inv.asDiagonal() * block * inv.asDiagonal();
  fa.prenorm_degrees = fa.degrees;
  fa.degrees = fa.block(0).real().rowwise().sum();
  for (int i = 0; i < N; ++i)
    if (!(fa.degrees(i) > 1e-300))
      throw NumericalError("density normalization: point " + std::to_string(i) + " isolated");
  fa.density_normalized = true;
  fa.config.density_normalize = true;
  return fa;
}

}  // namespace sgl
