#include "sgl/dataset.hpp"

#include <cmath>
#include <random>

#include "sgl/errors.hpp"

namespace sgl {

void SteerableDataset::validate() const {
  if (values.cols() != layout.D)
    throw LayoutError("dataset: value columns do not match the angular layout");
  if (!values.allFinite()) throw LayoutError("dataset: non-finite entries");
  if (is_real) {
    double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    for (int m = 1; m <= layout.M; ++m) {
      if (layout.count(-m) != layout.count(m))
        throw LayoutError("dataset: real flag requires mirrored radial counts");
      for (int l = 0; l < layout.count(m); ++l) {
        auto pos = values.col(layout.column(m, l));
        auto neg = values.col(layout.column(-m, l));
        if ((neg - pos.conjugate()).cwiseAbs().maxCoeff() > 1e-9 * scale)
          throw LayoutError("dataset: real flag violated by non-conjugate columns");
      }
    }
    if (layout.count(0) > 0) {
      auto zero_block = values.middleCols(layout.offset(0), layout.count(0));
      if (zero_block.imag().cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw LayoutError("dataset: real flag requires real m=0 columns");
    }
  }
}

void rotate_point_inplace(RowRef row, const AngularLayout& layout, double phi) {
  if (row.size() != layout.D) throw LayoutError("rotate: row length does not match layout");
  for (int m = -layout.M; m <= layout.M; ++m) {
    if (m == 0 || layout.count(m) == 0) continue;
    row.segment(layout.offset(m), layout.count(m)) *= std::polar(1.0, m * phi);
  }
}

RowVec rotate_point(const ConstRowRef& row, const AngularLayout& layout, double phi) {
  RowVec out = row;
  rotate_point_inplace(out, layout, phi);
  return out;
}

SteerableDataset rotate_dataset(const SteerableDataset& ds, const std::vector<double>& phis) {
  if (static_cast<int>(phis.size()) != ds.n())
    throw LayoutError("rotate: one angle per dataset row required");
  SteerableDataset out = ds;
  for (int i = 0; i < out.n(); ++i) rotate_point_inplace(out.values.row(i), out.layout, phis[i]);
  return out;
}

RowVec sphere_point(double px, double py, double pz) {
  RowVec row(2);
  row(0) = Complex(pz, 0.0);
  row(1) = Complex(px, py);
  return row;
}

SteerableDataset gen_sphere(int N, std::uint64_t seed) {
  if (N < 1) throw ConfigError("gen_sphere: N must be positive");
  SteerableDataset ds;
  ds.layout = AngularLayout::from_counts(1, {0, 1, 1});
  ds.values.resize(N, 2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < N; ++i) {
    double px, py, pz, norm;
    do {
      px = gauss(rng);
      py = gauss(rng);
      pz = gauss(rng);
      norm = std::sqrt(px * px + py * py + pz * pz);
    } while (norm < 1e-12);
    ds.values.row(i) = sphere_point(px / norm, py / norm, pz / norm);
  }
  return ds;
}

BlockUnitary BlockUnitary::identity(const AngularLayout& layout) {
  BlockUnitary map;
  map.from = layout;
  map.to = layout;
  for (int m = -layout.M; m <= layout.M; ++m)
    map.blocks.push_back(Matrix::Identity(layout.count(m), layout.count(m)));
  return map;
}

BlockUnitary random_block_embedding(const AngularLayout& from, int D_new, std::uint64_t seed) {
  if (D_new < from.D) throw LayoutError("embedding: target dimension smaller than source");
  std::vector<int> counts(from.ell);
  int extra = D_new - from.D;
  // Spread the added columns over the angular indices that carry data.
  while (extra > 0) {
    bool placed = false;
    for (std::size_t i = 0; i < counts.size() && extra > 0; ++i) {
      if (from.ell[i] == 0) continue;
      ++counts[i];
      --extra;
      placed = true;
    }
    if (!placed) throw LayoutError("embedding: layout has no columns to extend");
  }

  BlockUnitary map;
  map.from = from;
  map.to = AngularLayout::from_counts(from.M, counts);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int m = -from.M; m <= from.M; ++m) {
    int rows = map.to.count(m), cols = from.count(m);
    Matrix g(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
    if (cols == 0) {
      map.blocks.emplace_back(rows, 0);
      continue;
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    map.blocks.push_back(std::move(q));
  }
  return map;
}

RowVec embed_row(const BlockUnitary& map, const ConstRowRef& row) {
  if (row.size() != map.from.D) throw LayoutError("embedding: row length mismatch");
  RowVec out = RowVec::Zero(map.to.D);
  for (int m = -map.from.M; m <= map.from.M; ++m) {
    int cols = map.from.count(m);
    if (cols == 0) continue;
    out.segment(map.to.offset(m), map.to.count(m)) =
        (map.blocks[static_cast<std::size_t>(m + map.from.M)] *
         row.segment(map.from.offset(m), cols).transpose())
            .transpose();
  }
  return out;
}

RowVec unembed_row(const BlockUnitary& map, const ConstRowRef& row) {
  if (row.size() != map.to.D) throw LayoutError("embedding: row length mismatch");
  RowVec out = RowVec::Zero(map.from.D);
  for (int m = -map.from.M; m <= map.from.M; ++m) {
    int cols = map.from.count(m);
    if (cols == 0) continue;
    out.segment(map.from.offset(m), cols) =
        (map.blocks[static_cast<std::size_t>(m + map.from.M)].adjoint() *
         row.segment(map.to.offset(m), map.to.count(m)).transpose())
            .transpose();
  }
  return out;
}

SteerableDataset apply_embedding(const SteerableDataset& ds, const BlockUnitary& map) {
  if (!(ds.layout == map.from)) throw LayoutError("embedding: dataset layout mismatch");
  SteerableDataset out;
  out.layout = map.to;
  out.is_real = ds.is_real;
  out.values.resize(ds.n(), map.to.D);
  for (int i = 0; i < ds.n(); ++i) out.values.row(i) = embed_row(map, ds.values.row(i));
  return out;
}

SteerableDataset embed_orthogonal(const SteerableDataset& ds, int D_new, std::uint64_t seed) {
  return apply_embedding(ds, random_block_embedding(ds.layout, D_new, seed));
}

SteerableDataset add_noise(const SteerableDataset& ds, const NoiseSpec& spec) {
  if (spec.sigma2 < 0) throw ConfigError("add_noise: negative variance");
  SteerableDataset out = ds;
  if (spec.sigma2 == 0) return out;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double part = std::sqrt(spec.sigma2 / 2.0);
  if (!ds.is_real) {
    for (int i = 0; i < out.n(); ++i)
      for (int c = 0; c < out.layout.D; ++c) {
        double re = gauss(rng), im = gauss(rng);
        out.values(i, c) += Complex(part * re, part * im);
      }
    return out;
  }
  // Real-image datasets: keep the conjugate-mirror structure. The m=0 columns
  // receive real noise with the full per-coordinate variance, the m>0 columns
  // receive complex noise mirrored into the matching m<0 columns.
  const double full = std::sqrt(spec.sigma2);
  for (int i = 0; i < out.n(); ++i) {
    for (int l = 0; l < out.layout.count(0); ++l)
      out.values(i, out.layout.column(0, l)) += full * gauss(rng);
    for (int m = 1; m <= out.layout.M; ++m)
      for (int l = 0; l < out.layout.count(m); ++l) {
        Complex eta(part * gauss(rng), part * gauss(rng));
        out.values(i, out.layout.column(m, l)) += eta;
        out.values(i, out.layout.column(-m, l)) += std::conj(eta);
      }
  }
  return out;
}

SteerableDataset from_polar_grid(const Eigen::MatrixXcd& samples, int n_rings, int n_angles,
                                 int M, bool mark_real) {
  if (n_rings < 1 || n_angles < 1) throw ConfigError("polar grid: empty grid");
  if (samples.cols() != static_cast<Eigen::Index>(n_rings) * n_angles)
    throw LayoutError("polar grid: sample count does not match n_rings * n_angles");
  if (M < 0) M = (n_angles - 1) / 2;
  if (n_angles < 2 * M + 1)
    throw ConfigError("polar grid: n_angles below 2M+1 aliases the requested angular indices");

  SteerableDataset ds;
  ds.layout = AngularLayout::from_counts(M, std::vector<int>(2 * M + 1, n_rings));
  ds.is_real = mark_real;
  const int N = static_cast<int>(samples.rows());
  ds.values.resize(N, ds.layout.D);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < n_rings; ++l)
      for (int m = -M; m <= M; ++m) {
        Complex acc = 0.0;
        for (int t = 0; t < n_angles; ++t)
          acc += samples(i, l * n_angles + t) * std::polar(1.0, -m * 2.0 * M_PI * t / n_angles);
        ds.values(i, ds.layout.column(m, l)) = acc / static_cast<double>(n_angles);
      }
  return ds;
}

Eigen::MatrixXcd to_polar_grid(const SteerableDataset& ds, int n_angles) {
  const int M = ds.layout.M;
  const int n_rings = ds.layout.count(-M);
  for (int m = -M; m <= M; ++m)
    if (ds.layout.count(m) != n_rings)
      throw LayoutError("polar grid: layout must carry the same radial count per angular index");
  if (n_angles < 2 * M + 1)
    throw ConfigError("polar grid: n_angles below 2M+1 cannot represent the coefficients");
  Eigen::MatrixXcd samples(ds.n(), static_cast<Eigen::Index>(n_rings) * n_angles);
  for (int i = 0; i < ds.n(); ++i)
    for (int l = 0; l < n_rings; ++l)
      for (int t = 0; t < n_angles; ++t) {
        Complex acc = 0.0;
        for (int m = -M; m <= M; ++m)
          acc += ds.values(i, ds.layout.column(m, l)) *
                 std::polar(1.0, m * 2.0 * M_PI * t / n_angles);
        samples(i, l * n_angles + t) = acc;
      }
  return samples;
}

Eigen::MatrixXd realify(const SteerableDataset& ds) {
  Eigen::MatrixXd out(ds.n(), 2 * ds.layout.D);
  for (int c = 0; c < ds.layout.D; ++c) {
    out.col(2 * c) = ds.values.col(c).real();
    out.col(2 * c + 1) = ds.values.col(c).imag();
  }
  return out;
}

}  // namespace sgl
