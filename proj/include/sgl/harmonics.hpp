#pragma once

#include <vector>

#include "sgl/kernel.hpp"

namespace sgl {

/// Per-m eigenpairs of the steerable graph Laplacian blocks. In the normalized
/// case these come from S_m = I - D^{-1} W_hat^(m), solved through the similar
/// Hermitian matrix I - D^{-1/2} W_hat^(m) D^{-1/2}; the returned columns are
/// rescaled so that vectors_of(m).adjoint() * diag(degrees) * vectors_of(m) is
/// the identity. In the unnormalized case the blocks are diag(D) - W_hat^(m)
/// and the columns are plain orthonormal. Eigenvalues are sorted ascending and
/// non-negative up to roundoff. Immutable after construction.
struct HarmonicBasis {
  int M = 0;
  bool normalized = true;
  bool has_vectors = true;
  RealVector degrees;
  std::vector<RealVector> eigenvalues;  // 2M+1 vectors of length N, index m + M
  std::vector<Matrix> vectors;          // empty when has_vectors is false

  int n() const { return static_cast<int>(degrees.size()); }
  const RealVector& values_of(int m) const {
    return eigenvalues[static_cast<std::size_t>(m + M)];
  }
  const Matrix& vectors_of(int m) const { return vectors[static_cast<std::size_t>(m + M)]; }
};

/// Eigen-decomposes every block (solves run in parallel over m). Set
/// with_vectors=false for spectrum-only workloads; that skips the
/// back-transformation and the vector storage.
HarmonicBasis decompose(const FourierAffinity& fa, bool normalized = true,
                        bool with_vectors = true);

/// Retained counts per angular index for a cut-off frequency: k_m counts the
/// eigenvalues strictly below lambda_c.
struct TruncationPlan {
  double lambda_c = 0.0;
  int M = 0;
  std::vector<int> k_m;  // index m + M
  int M_eff = 0;         // largest |m| with k_m > 0

  int k_of(int m) const { return k_m[static_cast<std::size_t>(m + M)]; }
};

TruncationPlan truncate(const HarmonicBasis& basis, double lambda_c);

/// One eigenvalue of the joint spectrum; k is 1-based within its block.
struct SpectrumEntry {
  int m = 0;
  int k = 0;
  double lambda = 0.0;
};

/// All (m, k, lambda) triples sorted ascending by eigenvalue, ties broken by
/// (|m|, m, k).
std::vector<SpectrumEntry> eigenvalue_spectrum(const HarmonicBasis& basis);

/// Independent operator-level check of an eigenpair: assembles the candidate
/// eigenfunction v * e^{i m theta} on the angle grid, applies the discretized
/// Laplacian built directly from the dataset (dense quadrature, no Fourier
/// shortcut), and returns the max-norm of the residual against lambda times
/// the eigenfunction.
double verify_eigenpair(const SteerableDataset& ds, const FourierAffinity& fa, int m,
                        const Vector& v, double lambda, bool normalized = true);

}  // namespace sgl
