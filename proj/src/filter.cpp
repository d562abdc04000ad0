#include "sgl/filter.hpp"

#include <algorithm>
#include <cmath>

#include "sgl/errors.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

Matrix solve_block(const Matrix& X_m, const Matrix& V_m, bool* rank_deficient) {
  if (X_m.rows() != V_m.rows()) throw LayoutError("solve_block: row count mismatch");
  if (V_m.cols() > V_m.rows()) throw LayoutError("solve_block: more harmonics than points");
  if (rank_deficient) *rank_deficient = false;
  if (V_m.cols() == 0) return Matrix(0, X_m.cols());
  Eigen::ColPivHouseholderQR<Matrix> qr(V_m);
  if (qr.rank() < V_m.cols()) {
    if (rank_deficient) *rank_deficient = true;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(V_m);
    return cod.solve(X_m);
  }
  return qr.solve(X_m);
}

Matrix projection_matrix(const Matrix& V_m, int* rank) {
  const Eigen::Index N = V_m.rows();
  if (V_m.cols() == 0) {
    if (rank) *rank = 0;
    return Matrix::Zero(N, N);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(V_m);
  const int r = static_cast<int>(qr.rank());
  if (rank) *rank = r;
  Matrix q = qr.householderQ() * Matrix::Identity(N, r);
  return q * q.adjoint();
}

FilterResult filter_dataset(const SteerableDataset& ds, const HarmonicBasis& basis,
                            double lambda_c) {
  if (!basis.has_vectors) throw LayoutError("filter: basis carries no eigenvectors");
  if (basis.n() != ds.n()) throw LayoutError("filter: basis and dataset row counts differ");
  if (basis.M < ds.layout.M)
    throw LayoutError("filter: basis covers fewer angular indices than the dataset layout");

  const int Ml = ds.layout.M;
  FilterResult result;
  result.plan = truncate(basis, lambda_c);
  if (ds.is_real) {
    // Conjugate blocks share their spectrum; pin the mirrored counts so the
    // plan matches the mirrored solves even when lambda_c grazes an
    // eigenvalue.
    for (int m = 1; m <= result.plan.M; ++m)
      result.plan.k_m[static_cast<std::size_t>(-m + result.plan.M)] =
          result.plan.k_m[static_cast<std::size_t>(m + result.plan.M)];
  }
  result.B.assign(static_cast<std::size_t>(2 * Ml + 1), Matrix());
  result.residuals.assign(static_cast<std::size_t>(2 * Ml + 1), 0.0);
  result.ranks.assign(static_cast<std::size_t>(2 * Ml + 1), 0);
  result.filtered.layout = ds.layout;
  result.filtered.is_real = ds.is_real;
  result.filtered.values = Matrix::Zero(ds.n(), ds.layout.D);

  for (int m = -Ml; m <= Ml; ++m) {
    const RealVector& lam = basis.values_of(m);
    const int k = result.plan.k_of(m);
    if (k > 0 && k < lam.size()) {
      const double scale = std::max(1.0, std::abs(lam(lam.size() - 1)));
      if (lam(k) - lam(k - 1) < 1e-8 * scale) result.degenerate_cutoff = true;
    }
  }

  std::vector<int> solve_ms;
  for (int m = ds.is_real ? 0 : -Ml; m <= Ml; ++m)
    if (ds.layout.count(m) > 0) solve_ms.push_back(m);

  std::vector<int> deficient(solve_ms.size(), 0);
  parallel_for_each(static_cast<std::int64_t>(solve_ms.size()), [&](std::int64_t idx) {
    const int m = solve_ms[static_cast<std::size_t>(idx)];
    const int k = result.plan.k_of(m);
    const auto X_m = ds.values.middleCols(ds.layout.offset(m), ds.layout.count(m));
    result.ranks[static_cast<std::size_t>(m + Ml)] = k;
    if (k == 0) {
      result.B[static_cast<std::size_t>(m + Ml)] = Matrix(0, ds.layout.count(m));
      result.residuals[static_cast<std::size_t>(m + Ml)] = X_m.norm();
      return;
    }
    const Matrix V = basis.vectors_of(m).leftCols(k);
    bool rd = false;
    Matrix B_m = solve_block(X_m, V, &rd);
    if (rd) deficient[static_cast<std::size_t>(idx)] = 1;
    result.filtered.values.middleCols(ds.layout.offset(m), ds.layout.count(m)) = V * B_m;
    result.residuals[static_cast<std::size_t>(m + Ml)] =
        (X_m - V * B_m).norm();
    result.B[static_cast<std::size_t>(m + Ml)] = std::move(B_m);
  });
  for (std::size_t idx = 0; idx < solve_ms.size(); ++idx)
    if (deficient[idx]) result.rank_deficient_m.push_back(solve_ms[idx]);

  if (ds.is_real) {
    for (int m = 1; m <= Ml; ++m) {
      if (ds.layout.count(m) == 0) continue;
      result.filtered.values.middleCols(ds.layout.offset(-m), ds.layout.count(-m)) =
          result.filtered.values.middleCols(ds.layout.offset(m), ds.layout.count(m)).conjugate();
      result.B[static_cast<std::size_t>(-m + Ml)] =
          result.B[static_cast<std::size_t>(m + Ml)].conjugate();
      result.residuals[static_cast<std::size_t>(-m + Ml)] =
          result.residuals[static_cast<std::size_t>(m + Ml)];
      result.ranks[static_cast<std::size_t>(-m + Ml)] =
          result.ranks[static_cast<std::size_t>(m + Ml)];
    }
  }
  return result;
}

VarianceEstimate variance_estimate(const TruncationPlan& plan, const AngularLayout& layout,
                                   double sigma2, int N) {
  if (plan.M < layout.M) throw LayoutError("variance estimate: plan covers too few blocks");
  VarianceEstimate est;
  int k_max = 0;
  double sum = 0.0;
  for (int m = -layout.M; m <= layout.M; ++m) {
    sum += static_cast<double>(plan.k_of(m)) * layout.count(m);
    if (layout.count(m) > 0) k_max = std::max(k_max, plan.k_of(m));
  }
  est.value = sigma2 * sum / N;
  est.bound = static_cast<double>(k_max) * (layout.D * sigma2) / N;
  return est;
}

ErrorReport error_report(const SteerableDataset& clean, const SteerableDataset& hat,
                         const SteerableDataset& tilde) {
  if (!(clean.layout == hat.layout) || !(clean.layout == tilde.layout) ||
      clean.n() != hat.n() || clean.n() != tilde.n())
    throw LayoutError("error report: shape mismatch");
  const double n = clean.n();
  ErrorReport report;
  report.bias = (clean.values - hat.values).squaredNorm() / n;
  report.variance = (hat.values - tilde.values).squaredNorm() / n;
  report.total = (clean.values - tilde.values).squaredNorm() / n;
  return report;
}

}  // namespace sgl
