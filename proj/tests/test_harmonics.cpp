#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sgl/errors.hpp"
#include "sgl/harmonics.hpp"

using namespace sgl;
using namespace sgl::testing;

namespace {

AngularLayout mixed_layout() { return AngularLayout::from_counts(2, {1, 2, 2, 2, 1}); }

FourierAffinity small_affinity(int N, std::uint64_t seed, bool density = false) {
  auto ds = random_dataset(N, mixed_layout(), seed, 0.6);
  KernelConfig config;
  config.epsilon = 1.2;
  config.K = 32;
  config.density_normalize = density;
  return fourier_blocks(ds, config);
}

}  // namespace

TEST_CASE("normalized eigenpairs satisfy the block eigen-equations") {
  auto fa = small_affinity(12, 7);
  auto basis = decompose(fa, true);
  RealVector dinv = fa.degrees.cwiseInverse();
  for (int m = -fa.M; m <= fa.M; ++m) {
    Matrix S = Matrix::Identity(fa.n(), fa.n()) - dinv.asDiagonal() * fa.block(m);
    const RealVector& lam = basis.values_of(m);
    const Matrix& V = basis.vectors_of(m);
    CHECK(lam.minCoeff() > -1e-9);
    for (int k = 0; k + 1 < fa.n(); ++k) CHECK(lam(k) <= lam(k + 1));
    for (int k = 0; k < fa.n(); ++k) {
      double residual = (S * V.col(k) - lam(k) * V.col(k)).norm() / V.col(k).norm();
      CHECK(residual < 1e-8);
    }
    // Columns are orthonormal in the degree-weighted inner product.
    Matrix gram = V.adjoint() * fa.degrees.asDiagonal() * V;
    CHECK(max_abs(gram - Matrix::Identity(fa.n(), fa.n())) < 1e-8);
  }
}

TEST_CASE("unnormalized eigenpairs diagonalize D - W with orthonormal vectors") {
  auto fa = small_affinity(10, 13);
  auto basis = decompose(fa, false);
  for (int m = -fa.M; m <= fa.M; ++m) {
    Matrix S = Matrix(fa.degrees.cast<Complex>().asDiagonal()) - fa.block(m);
    const RealVector& lam = basis.values_of(m);
    const Matrix& V = basis.vectors_of(m);
    CHECK(lam.minCoeff() > -1e-9);
    CHECK(max_abs(S * V - V * lam.cast<Complex>().asDiagonal()) < 1e-8);
    CHECK(max_abs(V.adjoint() * V - Matrix::Identity(fa.n(), fa.n())) < 1e-8);
  }
}

TEST_CASE("single point and constant vector are annihilated") {
  SteerableDataset ds;
  ds.layout = AngularLayout::from_counts(1, {0, 1, 1});
  ds.values = Matrix::Zero(1, 2);
  ds.values(0, 0) = Complex(0.4, 0.0);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 8;
  auto fa = fourier_blocks(ds, config);
  auto basis = decompose(fa, true);
  CHECK(std::abs(basis.values_of(0)(0)) < 1e-12);

  auto fa_big = small_affinity(9, 19);
  auto big = decompose(fa_big, true);
  // D^{-1} W_hat^(0) is row-stochastic, so the all-ones vector has eigenvalue 0.
  Matrix S = Matrix::Identity(9, 9) -
             fa_big.degrees.cwiseInverse().asDiagonal() * fa_big.block(0);
  Vector ones = Vector::Ones(9);
  CHECK((S * ones).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(big.values_of(0)(0)) < 1e-10);
}

TEST_CASE("normalized and unnormalized paths agree when degrees are equal") {
  // An orbit dataset: rotated copies of one point at grid angles share one
  // degree value by symmetry.
  auto layout = AngularLayout::from_counts(2, {1, 1, 1, 1, 1});
  auto seedling = random_dataset(1, layout, 3);
  const int N = 8;
  SteerableDataset ds;
  ds.layout = layout;
  ds.values.resize(N, layout.D);
  for (int i = 0; i < N; ++i)
    ds.values.row(i) = rotate_point(seedling.values.row(0), layout, 2.0 * M_PI * i / N);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 32;  // multiple of the orbit size, so degrees match exactly
  auto fa = fourier_blocks(ds, config);
  CHECK((fa.degrees.array() - fa.degrees(0)).abs().maxCoeff() < 1e-12);
  auto normalized = decompose(fa, true);
  auto plain = decompose(fa, false);
  for (int m = -fa.M; m <= fa.M; ++m)
    CHECK((normalized.values_of(m) - plain.values_of(m) / fa.degrees(0)).cwiseAbs().maxCoeff() <
          1e-9);
}

TEST_CASE("truncation rule counts eigenvalues strictly below the cutoff") {
  HarmonicBasis basis;
  basis.M = 0;
  basis.normalized = true;
  basis.has_vectors = false;
  basis.degrees = RealVector::Ones(3);
  RealVector lam(3);
  lam << 0.0, 0.1, 0.5;
  basis.eigenvalues = {lam};
  CHECK(truncate(basis, 0.5).k_of(0) == 2);  // strict inequality at the boundary
  CHECK(truncate(basis, 0.0).k_of(0) == 0);
  CHECK(truncate(basis, -1.0).k_of(0) == 0);
  CHECK(truncate(basis, 1.0).k_of(0) == 3);
  CHECK(truncate(basis, 1.0).M_eff == 0);
}

TEST_CASE("truncation over a computed basis hits both endpoints") {
  auto fa = small_affinity(8, 23);
  auto basis = decompose(fa, true);
  auto none = truncate(basis, 0.0);
  auto all = truncate(basis, basis.values_of(0).maxCoeff() + 10.0);
  for (int m = -fa.M; m <= fa.M; ++m) {
    CHECK(none.k_of(m) == 0);
    CHECK(all.k_of(m) == fa.n());
  }
  CHECK(none.M_eff == 0);
  CHECK(all.M_eff == fa.M);
}

TEST_CASE("joint spectrum is sorted with deterministic tie-breaking") {
  auto fa = small_affinity(7, 29);
  auto spectrum = eigenvalue_spectrum(decompose(fa, true));
  CHECK(spectrum.size() == static_cast<std::size_t>(7 * (2 * fa.M + 1)));
  for (std::size_t i = 0; i + 1 < spectrum.size(); ++i)
    CHECK(spectrum[i].lambda <= spectrum[i + 1].lambda);

  // A single radially symmetric point: one zero eigenvalue per block, ties
  // broken by |m| then m then k.
  SteerableDataset single;
  single.layout = AngularLayout::from_counts(1, {0, 1, 1});
  single.values = Matrix::Zero(1, 2);
  single.values(0, 0) = Complex(1.0, 0.0);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 8;
  auto sp = eigenvalue_spectrum(decompose(fourier_blocks(single, config), true));
  CHECK(sp.front().m == 0);
  CHECK(sp.front().k == 1);
  CHECK(std::abs(sp.front().lambda) < 1e-12);
}

TEST_CASE("spectrum is invariant under per-point rotations") {
  auto ds = random_dataset(10, mixed_layout(), 31, 0.6);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 64;
  auto basis = decompose(fourier_blocks(ds, config), true);
  auto rotated = rotate_dataset(ds, random_angles(ds.n(), 17));
  auto basis_rot = decompose(fourier_blocks(rotated, config), true);
  for (int m = -basis.M; m <= basis.M; ++m)
    CHECK((basis.values_of(m) - basis_rot.values_of(m)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("retained spectral projectors rotate with the dataset") {
  auto ds = random_dataset(9, mixed_layout(), 37, 0.6);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 64;
  auto fa = fourier_blocks(ds, config);
  auto basis = decompose(fa, true);
  auto phis = random_angles(ds.n(), 41);
  auto fa_rot = fourier_blocks(rotate_dataset(ds, phis), config);
  auto basis_rot = decompose(fa_rot, true);

  // Pick a cutoff away from degeneracies: halfway into each spectrum.
  for (int m = -basis.M; m <= basis.M; ++m) {
    const RealVector& lam = basis.values_of(m);
    const int k = 4;
    REQUIRE(lam(k) - lam(k - 1) > 1e-6);  // generic gap
    Matrix P = basis.vectors_of(m).leftCols(k) *
               basis.vectors_of(m).leftCols(k).adjoint() * fa.degrees.asDiagonal();
    Matrix P_rot = basis_rot.vectors_of(m).leftCols(k) *
                   basis_rot.vectors_of(m).leftCols(k).adjoint() * fa_rot.degrees.asDiagonal();
    Vector phases(ds.n());
    for (int i = 0; i < ds.n(); ++i)
      phases(i) = std::polar(1.0, m * phis[static_cast<std::size_t>(i)]);
    Matrix expected = phases.asDiagonal() * P * phases.conjugate().asDiagonal();
    CHECK(max_abs(P_rot - expected) < 1e-8);
  }
}

TEST_CASE("eigenpair verification accepts computed pairs and rejects random ones") {
  auto ds = random_dataset(8, mixed_layout(), 43, 0.6);
  KernelConfig config;
  config.epsilon = 1.1;
  config.K = 32;
  auto fa = fourier_blocks(ds, config);
  auto basis = decompose(fa, true);
  for (int m : {-2, 0, 1}) {
    for (int k : {0, 3, 7}) {
      double res = verify_eigenpair(ds, fa, m, basis.vectors_of(m).col(k),
                                    basis.values_of(m)(k));
      CHECK(res < 1e-8);
    }
  }
  // The same operator check through the unnormalized path.
  auto plain = decompose(fa, false);
  CHECK(verify_eigenpair(ds, fa, 1, plain.vectors_of(1).col(2), plain.values_of(1)(2), false) <
        1e-8);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Vector junk(ds.n());
  for (int i = 0; i < ds.n(); ++i) junk(i) = Complex(gauss(rng), gauss(rng));
  CHECK(verify_eigenpair(ds, fa, 1, junk, 0.0) > 1e-3);

  // Constants with m = 0 are annihilated by the normalized operator.
  CHECK(verify_eigenpair(ds, fa, 0, Vector::Ones(ds.n()), 0.0) < 1e-10);
}

TEST_CASE("fourth harmonic of angular index three on the sphere verifies against the operator") {
  auto ds = gen_sphere(512, 2023);
  KernelConfig config;
  config.epsilon = 1.0;
  config.K = 256;
  config.m_max = 3;
  auto fa = fourier_blocks(ds, config);
  auto basis = decompose(fa, true);
  const int m = 3, k = 3;  // fourth pair of the m = 3 block
  double res =
      verify_eigenpair(ds, fa, m, basis.vectors_of(m).col(k), basis.values_of(m)(k));
  CHECK(res < 1e-8);
  CHECK(basis.values_of(m)(k) > 0.0);
  CHECK(basis.values_of(m)(k) < 2.5);
  // Eigenvalues below it belong to lower spherical-harmonic shells.
  for (int lower = 0; lower < k; ++lower)
    CHECK(basis.values_of(m)(lower) <= basis.values_of(m)(k));
}

TEST_CASE("decompose rejects spectrum-only bases downstream of vector use") {
  auto fa = small_affinity(6, 51);
  auto basis = decompose(fa, true, false);
  CHECK(!basis.has_vectors);
  CHECK(basis.vectors.empty());
  CHECK(basis.values_of(0).size() == 6);
}
