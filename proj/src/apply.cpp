#include "sgl/apply.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sgl/errors.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

GammaFunction GammaFunction::constant(int N, int K, Complex value) {
  GammaFunction g;
  g.values = Matrix::Constant(N, K, value);
  return g;
}

GammaFunction GammaFunction::mode(const Vector& v, int m, int K) {
  GammaFunction g;
  g.values.resize(v.size(), K);
  for (int k = 0; k < K; ++k)
    g.values.col(k) = v * std::polar(1.0, m * 2.0 * M_PI * k / K);
  return g;
}

namespace {

void check_shapes(const SteerableDataset& ds, const FourierAffinity& fa, const GammaFunction& g) {
  if (ds.n() != fa.n() || g.n() != ds.n())
    throw LayoutError("apply: dataset, affinity and function sizes disagree");
  if (g.K() != fa.config.K)
    throw LayoutError("apply: function grid does not match the kernel quadrature size");
}

}  // namespace

GammaFunction apply_affinity(const SteerableDataset& ds, const FourierAffinity& fa,
                             const GammaFunction& g) {
  check_shapes(ds, fa, g);
  const int N = ds.n();
  const int K = fa.config.K;
  const KernelConfig& config = fa.config;
  RotationGrid grid(ds.layout, K, 0);
  RealVector norms(N);
  for (int i = 0; i < N; ++i) norms(i) = ds.values.row(i).squaredNorm();
  const Eigen::MatrixXd g_re = g.values.real();
  const Eigen::MatrixXd g_im = g.values.imag();

  GammaFunction out;
  out.values.resize(N, K);
  const double quad = 2.0 * M_PI / K;
  parallel_for_each(N, [&](std::int64_t i) {
    Vector c;
    Eigen::ArrayXd dist, w;
    Eigen::MatrixXd W(K, N);  // W(u, j) = affinity of x_i with x_j rotated by theta_u
    for (int j = 0; j < N; ++j) {
      grid.cross_correlation(ds.values.row(i), ds.values.row(j), c);
      affinity_samples(grid, config, norms(i), norms(j), c, w, dist);
      if (config.debias && j == static_cast<int>(i)) w.setZero();
      if (fa.density_normalized)
        w /= fa.prenorm_degrees(i) * fa.prenorm_degrees(j);
      W.col(j) = w.matrix();
    }
    // (W g)(i, t) = (2 pi / K) sum_u sum_j W(u, j) g(j, (t+u) mod K).
    Eigen::MatrixXd q_re = W * g_re;
    Eigen::MatrixXd q_im = W * g_im;
    for (int t = 0; t < K; ++t) {
      double acc_re = 0.0, acc_im = 0.0;
      for (int u = 0; u < K; ++u) {
        const int s = (t + u) % K;
        acc_re += q_re(u, s);
        acc_im += q_im(u, s);
      }
      out.values(i, t) = quad * Complex(acc_re, acc_im);
    }
  });
  return out;
}

GammaFunction apply_normalized(const SteerableDataset& ds, const FourierAffinity& fa,
                               const GammaFunction& g) {
  GammaFunction wg = apply_affinity(ds, fa, g);
  GammaFunction out;
  out.values = g.values - fa.degrees.cwiseInverse().asDiagonal() * wg.values;
  return out;
}

GammaFunction apply_unnormalized(const SteerableDataset& ds, const FourierAffinity& fa,
                                 const GammaFunction& g) {
  GammaFunction wg = apply_affinity(ds, fa, g);
  GammaFunction out;
  out.values = fa.degrees.asDiagonal() * g.values - wg.values;
  return out;
}

Complex gamma_inner(const GammaFunction& g, const GammaFunction& f) {
  if (g.n() != f.n() || g.K() != f.K()) throw LayoutError("gamma inner product: shape mismatch");
  const double quad = 2.0 * M_PI / g.K();
  return quad * (g.values.conjugate().cwiseProduct(f.values)).sum();
}

RotatedFunction lift_pointwise(std::function<double(const RowVec&, double)> f) {
  return [f = std::move(f)](const RowVec& row, const Eigen::ArrayXd& angles,
                            Eigen::ArrayXd& out) {
    out.resize(angles.size());
    for (Eigen::Index k = 0; k < angles.size(); ++k) out(k) = f(row, angles(k));
  };
}

const RotatedFunction sphere_test_function = [](const RowVec& row, const Eigen::ArrayXd& angles,
                                                Eigen::ArrayXd& out) {
  // Re{x(1,1) e^{i phi}} + Re{x(0,1)}.
  const Complex x11 = row(1);
  out = x11.real() * angles.cos() - x11.imag() * angles.sin() + row(0).real();
};

RotatedFunction embedded_test_function(const RotatedFunction& f, const BlockUnitary& map) {
  return [f, map](const RowVec& row, const Eigen::ArrayXd& angles, Eigen::ArrayXd& out) {
    f(unembed_row(map, row), angles, out);
  };
}

SteerableDataset prepend_point(const SteerableDataset& ds, const RowVec& point) {
  if (point.size() != ds.layout.D) throw LayoutError("prepend: row length mismatch");
  SteerableDataset out;
  out.layout = ds.layout;
  out.is_real = ds.is_real;
  out.values.resize(ds.n() + 1, ds.layout.D);
  out.values.row(0) = point;
  out.values.bottomRows(ds.n()) = ds.values;
  return out;
}

double estimate_laplace_beltrami(const SteerableDataset& ds, const RotatedFunction& f,
                                 int base_index, const KernelConfig& config) {
  if (base_index < 0 || base_index >= ds.n())
    throw LayoutError("estimate: base index out of range");
  if (config.epsilon <= 0) throw ConfigError("estimate: epsilon must be positive");
  const int K = config.K;
  if (K < 2 * ds.layout.M + 1) throw ConfigError("estimate: K below 2M+1 aliases the quadrature");

  const int N = ds.n();
  RotationGrid grid(ds.layout, K, 0);
  Eigen::ArrayXd angles(K);
  for (int k = 0; k < K; ++k) angles(k) = 2.0 * M_PI * k / K;
  const double base_norm = ds.values.row(base_index).squaredNorm();

  RealVector num(N), den(N);
  parallel_for_each(N, [&](std::int64_t j) {
    if (config.debias && j == base_index) {
      num(j) = den(j) = 0.0;
      return;
    }
    Vector c;
    Eigen::ArrayXd dist, w, fvals;
    grid.cross_correlation(ds.values.row(base_index), ds.values.row(j), c);
    affinity_samples(grid, config, base_norm, ds.values.row(j).squaredNorm(), c, w, dist);
    f(ds.values.row(j), angles, fvals);
    num(j) = (w * fvals).sum();
    den(j) = w.sum();
  });
  const double total_den = den.sum();
  if (!(total_den > 1e-300))
    throw NumericalError("estimate: degree underflow at the base point; increase epsilon");

  Eigen::ArrayXd f_base(1);
  Eigen::ArrayXd zero_angle = Eigen::ArrayXd::Zero(1);
  f(ds.values.row(base_index), zero_angle, f_base);
  // Signed so that the limit is the negative semi-definite surface Laplacian
  // (the sphere benchmark value is -2).
  return 4.0 / config.epsilon * (num.sum() / total_den - f_base(0));
}

double estimate_laplace_beltrami_at(const SteerableDataset& ds, const RotatedFunction& f,
                                    const RowVec& base_point, const KernelConfig& config) {
  return estimate_laplace_beltrami(prepend_point(ds, base_point), f, 0, config);
}

double standard_graph_laplacian_estimate(
    const Eigen::MatrixXd& points, const std::function<double(const Eigen::RowVectorXd&)>& f,
    int base_index, double epsilon) {
  if (base_index < 0 || base_index >= points.rows())
    throw LayoutError("standard estimate: base index out of range");
  if (epsilon <= 0) throw ConfigError("standard estimate: epsilon must be positive");
  const Eigen::RowVectorXd base = points.row(base_index);
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const double w = std::exp(-(points.row(j) - base).squaredNorm() / epsilon);
    num += w * f(points.row(j));
    den += w;
  }
  if (!(den > 1e-300)) throw NumericalError("standard estimate: degree underflow");
  return 4.0 / epsilon * (num / den - f(base));
}

}  // namespace sgl
