#include "sgl/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "sgl/errors.hpp"

namespace sgl {

namespace {

void put_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(bytes), std::end(bytes));
  put_bytes(out, bytes, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw FormatError("truncated file");
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(bytes), std::end(bytes));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_complex(std::ostream& out, Complex z) {
  put_le<double>(out, z.real());
  put_le<double>(out, z.imag());
}

Complex get_complex(std::istream& in) {
  double re = get_le<double>(in);
  double im = get_le<double>(in);
  return Complex(re, im);
}

void expect_magic(std::istream& in, const char* magic) {
  char buf[4];
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0)
    throw FormatError(std::string("bad magic; expected ") + magic);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open for reading: " + path);
  return in;
}

void put_matrix(std::ostream& out, const Matrix& mat) {
  for (Eigen::Index r = 0; r < mat.rows(); ++r)
    for (Eigen::Index c = 0; c < mat.cols(); ++c) put_complex(out, mat(r, c));
}

Matrix get_matrix(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  Matrix mat(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = get_complex(in);
  return mat;
}

}  // namespace

void save_sgl1(const std::string& path, const SteerableDataset& ds) {
  std::ofstream out = open_out(path);
  out.write("SGL1", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.layout.M));
  put_le<std::int32_t>(out, ds.is_real ? 1 : 0);
  for (int count : ds.layout.ell) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(count));
  put_matrix(out, ds.values);
  if (!out) throw FormatError("write failed: " + path);
}

SteerableDataset load_sgl1(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "SGL1");
  const auto version = get_le<std::uint32_t>(in);
  if (version != 1) throw FormatError("SGL1: unsupported version");
  const auto N = get_le<std::uint32_t>(in);
  const auto M = get_le<std::uint32_t>(in);
  const auto is_real = get_le<std::int32_t>(in);
  std::vector<int> counts(2 * M + 1);
  for (auto& count : counts) count = static_cast<int>(get_le<std::uint32_t>(in));
  SteerableDataset ds;
  ds.layout = AngularLayout::from_counts(static_cast<int>(M), std::move(counts));
  ds.is_real = is_real != 0;
  ds.values = get_matrix(in, N, ds.layout.D);
  char extra;
  if (in.read(&extra, 1)) throw FormatError("SGL1: trailing bytes");
  return ds;
}

void save_dataset_csv(const std::string& path, const SteerableDataset& ds) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << "i,m,ell,re,im\n";
  out.precision(17);
  for (int i = 0; i < ds.n(); ++i)
    for (int m = -ds.layout.M; m <= ds.layout.M; ++m)
      for (int l = 0; l < ds.layout.count(m); ++l) {
        const Complex z = ds.values(i, ds.layout.column(m, l));
        out << i << ',' << m << ',' << l << ',' << z.real() << ',' << z.imag() << '\n';
      }
  if (!out) throw FormatError("write failed: " + path);
}

SteerableDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,m,ell,re,im", 0) != 0)
    throw FormatError("dataset CSV: missing header");
  struct Entry {
    int i, m, l;
    Complex z;
  };
  std::vector<Entry> entries;
  int max_i = -1, max_m = 0;
  std::map<int, int> max_l;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Entry e;
    char comma;
    double re, im;
    if (!(row >> e.i >> comma >> e.m >> comma >> e.l >> comma >> re >> comma >> im))
      throw FormatError("dataset CSV: malformed line: " + line);
    e.z = Complex(re, im);
    entries.push_back(e);
    max_i = std::max(max_i, e.i);
    max_m = std::max(max_m, std::abs(e.m));
    auto [it, inserted] = max_l.try_emplace(e.m, e.l);
    if (!inserted) it->second = std::max(it->second, e.l);
  }
  if (max_i < 0) throw FormatError("dataset CSV: no entries");
  std::vector<int> counts(2 * max_m + 1, 0);
  for (const auto& [m, l] : max_l) counts[static_cast<std::size_t>(m + max_m)] = l + 1;
  SteerableDataset ds;
  ds.layout = AngularLayout::from_counts(max_m, std::move(counts));
  ds.values = Matrix::Zero(max_i + 1, ds.layout.D);
  for (const auto& e : entries) ds.values(e.i, ds.layout.column(e.m, e.l)) = e.z;
  return ds;
}

void save_sga1(const std::string& path, const FourierAffinity& fa) {
  std::ofstream out = open_out(path);
  out.write("SGA1", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(fa.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(fa.M));
  put_le<double>(out, fa.config.epsilon);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(fa.config.K));
  put_le<std::uint8_t>(out, fa.config.debias ? 1 : 0);
  put_le<std::uint8_t>(out, fa.density_normalized ? 1 : 0);
  put_le<std::uint8_t>(out, fa.config.sparsify_threshold ? 1 : 0);
  put_le<double>(out, fa.config.sparsify_threshold.value_or(0.0));
  for (int i = 0; i < fa.n(); ++i) put_le<double>(out, fa.degrees(i));
  for (int i = 0; i < fa.n(); ++i)
    put_le<double>(out, fa.density_normalized ? fa.prenorm_degrees(i) : 0.0);
  for (const auto& block : fa.blocks) put_matrix(out, block);
  if (!out) throw FormatError("write failed: " + path);
}

FourierAffinity load_sga1(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "SGA1");
  if (get_le<std::uint32_t>(in) != 1) throw FormatError("SGA1: unsupported version");
  const auto N = get_le<std::uint32_t>(in);
  const auto M = get_le<std::uint32_t>(in);
  FourierAffinity fa;
  fa.M = static_cast<int>(M);
  fa.config.epsilon = get_le<double>(in);
  fa.config.K = static_cast<int>(get_le<std::uint32_t>(in));
  fa.config.m_max = fa.M;
  fa.config.debias = get_le<std::uint8_t>(in) != 0;
  fa.density_normalized = get_le<std::uint8_t>(in) != 0;
  fa.config.density_normalize = fa.density_normalized;
  const bool has_threshold = get_le<std::uint8_t>(in) != 0;
  const double threshold = get_le<double>(in);
  if (has_threshold) fa.config.sparsify_threshold = threshold;
  fa.degrees.resize(N);
  for (std::uint32_t i = 0; i < N; ++i) fa.degrees(i) = get_le<double>(in);
  RealVector prenorm(N);
  for (std::uint32_t i = 0; i < N; ++i) prenorm(i) = get_le<double>(in);
  if (fa.density_normalized) fa.prenorm_degrees = prenorm;
  for (int m = -fa.M; m <= fa.M; ++m) fa.blocks.push_back(get_matrix(in, N, N));
  return fa;
}

void save_basis(const std::string& path, const HarmonicBasis& basis) {
  std::ofstream out = open_out(path);
  out.write("SGB1", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(basis.n()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(basis.M));
  put_le<std::uint8_t>(out, basis.normalized ? 1 : 0);
  put_le<std::uint8_t>(out, basis.has_vectors ? 1 : 0);
  for (int i = 0; i < basis.n(); ++i) put_le<double>(out, basis.degrees(i));
  for (int m = -basis.M; m <= basis.M; ++m) {
    const RealVector& lam = basis.values_of(m);
    for (int k = 0; k < lam.size(); ++k) put_le<double>(out, lam(k));
    if (basis.has_vectors) put_matrix(out, basis.vectors_of(m));
  }
  if (!out) throw FormatError("write failed: " + path);
}

HarmonicBasis load_basis(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_magic(in, "SGB1");
  if (get_le<std::uint32_t>(in) != 1) throw FormatError("SGB1: unsupported version");
  const auto N = get_le<std::uint32_t>(in);
  const auto M = get_le<std::uint32_t>(in);
  HarmonicBasis basis;
  basis.M = static_cast<int>(M);
  basis.normalized = get_le<std::uint8_t>(in) != 0;
  basis.has_vectors = get_le<std::uint8_t>(in) != 0;
  basis.degrees.resize(N);
  for (std::uint32_t i = 0; i < N; ++i) basis.degrees(i) = get_le<double>(in);
  for (int m = -basis.M; m <= basis.M; ++m) {
    RealVector lam(N);
    for (std::uint32_t k = 0; k < N; ++k) lam(k) = get_le<double>(in);
    basis.eigenvalues.push_back(std::move(lam));
    if (basis.has_vectors) basis.vectors.push_back(get_matrix(in, N, N));
  }
  return basis;
}

void save_spectrum_csv(const std::string& path, const std::vector<SpectrumEntry>& spectrum) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << "m,k,lambda\n";
  out.precision(17);
  for (const auto& entry : spectrum)
    out << entry.m << ',' << entry.k << ',' << entry.lambda << '\n';
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace sgl
