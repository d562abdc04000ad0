#pragma once

#include <functional>

#include "sgl/kernel.hpp"

namespace sgl {

/// A function on {1..N} x S^1 sampled on the uniform K-point angle grid;
/// entry (i, k) is the value at point i and angle 2 pi k / K.
struct GammaFunction {
  Matrix values;  // N x K

  int n() const { return static_cast<int>(values.rows()); }
  int K() const { return static_cast<int>(values.cols()); }

  static GammaFunction constant(int N, int K, Complex value = Complex(1.0, 0.0));
  /// v_i e^{i m theta_k} - the sampled form of a steerable eigenfunction.
  static GammaFunction mode(const Vector& v, int m, int K);
};

/// Dense quadrature application of the steerable affinity operator: the angle
/// integral is replaced by a (2 pi / K) Riemann sum and the angular kernel is
/// re-evaluated from the dataset under fa's config (debias, sparsification,
/// density normalization), so no Fourier-block shortcut is involved.
GammaFunction apply_affinity(const SteerableDataset& ds, const FourierAffinity& fa,
                             const GammaFunction& g);

/// g - D^{-1} W g.
GammaFunction apply_normalized(const SteerableDataset& ds, const FourierAffinity& fa,
                               const GammaFunction& g);

/// D g - W g.
GammaFunction apply_unnormalized(const SteerableDataset& ds, const FourierAffinity& fa,
                                 const GammaFunction& g);

/// <g, f> on Gamma with the K-grid quadrature.
Complex gamma_inner(const GammaFunction& g, const GammaFunction& f);

/// Evaluates a real test function at all grid rotations of one coefficient
/// row: out[k] = f(rotate(row, angles[k])).
using RotatedFunction =
    std::function<void(const RowVec& row, const Eigen::ArrayXd& angles, Eigen::ArrayXd& out)>;

/// Lifts a scalar f(row, angle) to the batched form.
RotatedFunction lift_pointwise(std::function<double(const RowVec&, double)> f);

/// The sphere benchmark function Re{x(1,1)} + Re{x(0,1)} composed with the
/// rotation action; its surface Laplacian at [0, 1] equals -2.
extern const RotatedFunction sphere_test_function;

/// Wraps sphere_test_function behind a block-unitary embedding.
RotatedFunction embedded_test_function(const RotatedFunction& f, const BlockUnitary& map);

/// Pointwise estimate of the surface Laplacian of f at the dataset row
/// base_index and angle 0: (4/eps) [ sum_{j,k} W f / sum_{j,k} W - f(x_b) ],
/// the angle integrals replaced by K-point sums. The sign follows the
/// negative semi-definite Laplacian, so the sphere benchmark value is -2.
/// With config.debias the base point's own affinity is excluded. Throws
/// NumericalError when the degree at the base point underflows.
double estimate_laplace_beltrami(const SteerableDataset& ds, const RotatedFunction& f,
                                 int base_index, const KernelConfig& config);

/// Appends base_point as row 0 and estimates there.
double estimate_laplace_beltrami_at(const SteerableDataset& ds, const RotatedFunction& f,
                                    const RowVec& base_point, const KernelConfig& config);

/// Prepends one row to a dataset (the designated test point goes to index 0).
SteerableDataset prepend_point(const SteerableDataset& ds, const RowVec& point);

/// The classical normalized graph Laplacian estimate on plain real vectors,
/// no rotations: (4/eps) [ sum_j w_j f(x_j) / sum_j w_j - f(x_b) ].
double standard_graph_laplacian_estimate(
    const Eigen::MatrixXd& points, const std::function<double(const Eigen::RowVectorXd&)>& f,
    int base_index, double epsilon);

}  // namespace sgl
