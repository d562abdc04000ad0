#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "sgl/layout.hpp"

namespace sgl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;

// Row views that bind matrix rows in place (rows of column-major storage are
// strided).
using RowRef = Eigen::Ref<RowVec, 0, Eigen::InnerStride<>>;
using ConstRowRef = Eigen::Ref<const RowVec, 0, Eigen::InnerStride<>>;

/// A dataset of N steerable coefficient rows. Rotating a point by phi
/// multiplies its (m, l) coordinate by e^{i m phi}, so the angular layout
/// determines the action of planar rotations on rows. Values are treated as
/// immutable after construction and are safe to share across threads.
struct SteerableDataset {
  AngularLayout layout;
  Matrix values;         // N x layout.D
  bool is_real = false;  // row coefficients satisfy x(-m,l) = conj(x(m,l))

  int n() const { return static_cast<int>(values.rows()); }

  /// Throws LayoutError on shape mismatch or non-finite entries; with is_real
  /// set, also checks the conjugate-mirror structure of the columns.
  void validate() const;
};

struct NoiseSpec {
  double sigma2 = 0.0;  // per-coordinate complex variance (sigma2/2 per part)
  std::uint64_t seed = 0;
};

/// In-place coefficient rotation: x(m,l) <- x(m,l) e^{i m phi}.
void rotate_point_inplace(RowRef row, const AngularLayout& layout, double phi);
RowVec rotate_point(const ConstRowRef& row, const AngularLayout& layout, double phi);

/// Rotates row i by phis[i].
SteerableDataset rotate_dataset(const SteerableDataset& ds, const std::vector<double>& phis);

/// N points drawn uniformly from the unit sphere, embedded as
/// x = (p_z, p_x + i p_y) with layout M=1, ell = {0, 1, 1}.
SteerableDataset gen_sphere(int N, std::uint64_t seed);

/// Coefficient row for a sphere point given in Cartesian coordinates.
RowVec sphere_point(double px, double py, double pz);

/// A block-diagonal isometry between two layouts with the same M: one matrix
/// of orthonormal columns per angular index, so rotations commute with the
/// embedding and pairwise rotational distances are preserved.
struct BlockUnitary {
  AngularLayout from;
  AngularLayout to;
  std::vector<Matrix> blocks;  // per m: to.count(m) x from.count(m)

  static BlockUnitary identity(const AngularLayout& layout);
};

/// Random per-m isometry into total dimension D_new; the extra columns are
/// spread round-robin over the angular indices that already have columns.
BlockUnitary random_block_embedding(const AngularLayout& from, int D_new, std::uint64_t seed);

SteerableDataset apply_embedding(const SteerableDataset& ds, const BlockUnitary& map);
RowVec embed_row(const BlockUnitary& map, const ConstRowRef& row);
RowVec unembed_row(const BlockUnitary& map, const ConstRowRef& row);

/// Embeds into C^{D_new} by a random block unitary (see random_block_embedding).
/// Throws LayoutError if D_new is smaller than the current dimension.
SteerableDataset embed_orthogonal(const SteerableDataset& ds, int D_new, std::uint64_t seed);

/// Adds i.i.d. complex Gaussian noise with per-coordinate variance spec.sigma2.
SteerableDataset add_noise(const SteerableDataset& ds, const NoiseSpec& spec);

/// Expands images sampled on a polar grid (one row per image, ring-major:
/// sample (l, t) at flat index l*n_angles + t, angle t*2pi/n_angles) into
/// angular Fourier coefficients per ring. M defaults to (n_angles-1)/2, the
/// largest aliasing-free choice; n_angles < 2M+1 raises ConfigError. Every
/// angular index keeps n_rings radial columns.
SteerableDataset from_polar_grid(const Eigen::MatrixXcd& samples, int n_rings, int n_angles,
                                 int M = -1, bool mark_real = false);

/// Evaluates the coefficient rows back on a polar grid with n_angles samples
/// per ring. Requires all angular indices to carry the same radial count.
Eigen::MatrixXcd to_polar_grid(const SteerableDataset& ds, int n_angles);

/// Interleaves real and imaginary parts into a real matrix with 2*D columns;
/// Euclidean norms and distances match the complex ones.
Eigen::MatrixXd realify(const SteerableDataset& ds);

}  // namespace sgl
