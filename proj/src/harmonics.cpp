#include "sgl/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgl/apply.hpp"
#include "sgl/errors.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

HarmonicBasis decompose(const FourierAffinity& fa, bool normalized, bool with_vectors) {
  const int N = fa.n();
  for (int i = 0; i < N; ++i)
    if (!(fa.degrees(i) > 0)) throw NumericalError("decompose: non-positive degree");

  HarmonicBasis basis;
  basis.M = fa.M;
  basis.normalized = normalized;
  basis.has_vectors = with_vectors;
  basis.degrees = fa.degrees;
  basis.eigenvalues.assign(static_cast<std::size_t>(2 * fa.M + 1), RealVector());
  if (with_vectors) basis.vectors.assign(static_cast<std::size_t>(2 * fa.M + 1), Matrix());

  RealVector dinv_sqrt = fa.degrees.cwiseSqrt().cwiseInverse();
  std::vector<std::string> failures(static_cast<std::size_t>(2 * fa.M + 1));
  parallel_for_each(2 * fa.M + 1, [&](std::int64_t idx) {
    const int m = static_cast<int>(idx) - fa.M;
    Matrix S;
    if (normalized) {
      // Hermitian matrix similar to I - D^{-1} W_hat^(m) (same eigenvalues).
      S = -(dinv_sqrt.asDiagonal() * fa.block(m) * dinv_sqrt.asDiagonal());
      S.diagonal().array() += 1.0;
    } else {
      S = -fa.block(m);
      S.diagonal() += fa.degrees.cast<Complex>();
    }
    S = 0.5 * (S + S.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        S, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      failures[static_cast<std::size_t>(idx)] =
          "decompose: eigensolver did not converge for m=" + std::to_string(m);
      return;
    }
    basis.eigenvalues[static_cast<std::size_t>(idx)] = solver.eigenvalues();
    if (with_vectors) {
      if (normalized)
        basis.vectors[static_cast<std::size_t>(idx)] =
            dinv_sqrt.asDiagonal() * solver.eigenvectors();
      else
        basis.vectors[static_cast<std::size_t>(idx)] = solver.eigenvectors();
    }
  });
  for (const auto& failure : failures)
    if (!failure.empty()) throw NumericalError(failure);
  return basis;
}

TruncationPlan truncate(const HarmonicBasis& basis, double lambda_c) {
  TruncationPlan plan;
  plan.lambda_c = lambda_c;
  plan.M = basis.M;
  plan.k_m.resize(static_cast<std::size_t>(2 * basis.M + 1));
  plan.M_eff = 0;
  // The operator is positive semi-definite; eigenvalues below zero are
  // roundoff, so a non-positive cutoff retains nothing.
  if (lambda_c <= 0.0) return plan;
  for (int m = -basis.M; m <= basis.M; ++m) {
    const RealVector& lam = basis.values_of(m);
    int k = static_cast<int>(std::lower_bound(lam.data(), lam.data() + lam.size(), lambda_c) -
                             lam.data());
    plan.k_m[static_cast<std::size_t>(m + basis.M)] = k;
    if (k > 0) plan.M_eff = std::max(plan.M_eff, std::abs(m));
  }
  return plan;
}

std::vector<SpectrumEntry> eigenvalue_spectrum(const HarmonicBasis& basis) {
  std::vector<SpectrumEntry> entries;
  entries.reserve(static_cast<std::size_t>(2 * basis.M + 1) * basis.n());
  for (int m = -basis.M; m <= basis.M; ++m) {
    const RealVector& lam = basis.values_of(m);
    for (int k = 0; k < lam.size(); ++k)
      entries.push_back({m, k + 1, lam(k)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     if (a.lambda != b.lambda) return a.lambda < b.lambda;
                     if (std::abs(a.m) != std::abs(b.m)) return std::abs(a.m) < std::abs(b.m);
                     if (a.m != b.m) return a.m < b.m;
                     return a.k < b.k;
                   });
  return entries;
}

double verify_eigenpair(const SteerableDataset& ds, const FourierAffinity& fa, int m,
                        const Vector& v, double lambda, bool normalized) {
  if (v.size() != ds.n()) throw LayoutError("verify_eigenpair: vector length mismatch");
  GammaFunction phi = GammaFunction::mode(v, m, fa.config.K);
  GammaFunction applied =
      normalized ? apply_normalized(ds, fa, phi) : apply_unnormalized(ds, fa, phi);
  return (applied.values - lambda * phi.values).cwiseAbs().maxCoeff();
}

}  // namespace sgl
