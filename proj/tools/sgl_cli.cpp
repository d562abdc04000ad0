// Command-line surface for the steerable graph Laplacian library: dataset
// generation, harmonic computation, filtering, cross-validation, and the two
// benchmark harnesses. Every command writes a JSON run manifest next to its
// primary output so results can be reproduced from the recorded
// configuration.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgl/apply.hpp"
#include "sgl/errors.hpp"
#include "sgl/experiments.hpp"
#include "sgl/filter.hpp"
#include "sgl/harmonics.hpp"
#include "sgl/io.hpp"
#include "sgl/parallel.hpp"
#include "sgl/version.hpp"
#include "sgl/xval.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumerical = 4;

struct ManifestWriter {
  json doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  ManifestWriter(const std::string& command, int argc, char** argv) {
    doc["command"] = command;
    doc["library_version"] = sgl::kVersion;
    doc["threads"] = sgl::max_threads();
    json args = json::array();
    for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
    doc["argv"] = args;
    doc["inputs"] = json::array();
    doc["outputs"] = json::array();
    doc["config"] = json::object();
  }

  void input(const std::string& path) { doc["inputs"].push_back(path); }
  void output(const std::string& path) { doc["outputs"].push_back(path); }

  void write(const std::string& anchor_output) {
    doc["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(anchor_output + ".manifest.json");
    if (!out) throw sgl::FormatError("cannot write manifest for " + anchor_output);
    out << doc.dump(2) << "\n";
  }
};

json kernel_config_json(const sgl::KernelConfig& config) {
  json j;
  j["epsilon"] = config.epsilon;
  j["K"] = config.K;
  j["m_max"] = config.m_max;
  j["debias"] = config.debias;
  j["density_normalize"] = config.density_normalize;
  if (config.sparsify_threshold) j["sparsify_threshold"] = *config.sparsify_threshold;
  return j;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw sgl::FormatError("cannot open for writing: " + path);
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
  if (!out) throw sgl::FormatError("write failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Random band-limited dataset sampled on a polar grid and expanded back into
// coefficients, exercising the grid-ingestion path end to end.
sgl::SteerableDataset gen_polar_dataset(int N, int rings, int angles, int M, bool real,
                                        std::uint64_t seed) {
  if (M < 0) M = (angles - 1) / 2;
  auto layout = sgl::AngularLayout::from_counts(M, std::vector<int>(2 * M + 1, rings));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  sgl::SteerableDataset coeffs;
  coeffs.layout = layout;
  coeffs.values = sgl::Matrix::Zero(N, layout.D);
  for (int i = 0; i < N; ++i)
    for (int m = -M; m <= M; ++m)
      for (int l = 0; l < rings; ++l) {
        if (real && m < 0) continue;
        sgl::Complex z(gauss(rng), (real && m == 0) ? 0.0 : gauss(rng));
        coeffs.values(i, layout.column(m, l)) = z;
        if (real && m > 0) coeffs.values(i, layout.column(-m, l)) = std::conj(z);
      }
  auto samples = sgl::to_polar_grid(coeffs, angles);
  return sgl::from_polar_grid(samples, rings, angles, M, real);
}

int exit_code_for(const std::exception& err) {
  if (dynamic_cast<const sgl::ConfigError*>(&err)) return kExitConfig;
  if (dynamic_cast<const sgl::FormatError*>(&err)) return kExitFormat;
  if (dynamic_cast<const sgl::LayoutError*>(&err)) return kExitFormat;
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steerable graph Laplacian toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (default: SGL_THREADS or hardware)");

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a dataset (SGL1)");
  gen->require_subcommand(1);
  struct {
    int n = 2000;
    std::uint64_t seed = 0;
    std::string output;
    double noise_sigma2 = 0.0;
    std::uint64_t noise_seed = 1;
    int embed_dim = 0;
    std::uint64_t embed_seed = 2;
  } sphere_opts;
  auto* gen_sphere_cmd = gen->add_subcommand("sphere", "uniform unit-sphere dataset");
  gen_sphere_cmd->add_option("--n", sphere_opts.n, "point count")->check(CLI::PositiveNumber);
  gen_sphere_cmd->add_option("--seed", sphere_opts.seed, "RNG seed");
  gen_sphere_cmd->add_option("--output", sphere_opts.output, "SGL1 path")->required();
  gen_sphere_cmd->add_option("--noise-sigma2", sphere_opts.noise_sigma2,
                             "per-coordinate complex noise variance");
  gen_sphere_cmd->add_option("--noise-seed", sphere_opts.noise_seed, "noise RNG seed");
  gen_sphere_cmd->add_option("--embed-dim", sphere_opts.embed_dim,
                             "embed into this ambient dimension first");
  gen_sphere_cmd->add_option("--embed-seed", sphere_opts.embed_seed, "embedding RNG seed");

  struct {
    int n = 100;
    int rings = 4;
    int angles = 17;
    int M = -1;
    bool real = false;
    std::uint64_t seed = 0;
    std::string output;
  } polar_opts;
  auto* gen_polar_cmd = gen->add_subcommand("polar", "random band-limited polar-grid dataset");
  gen_polar_cmd->add_option("--n", polar_opts.n, "image count")->check(CLI::PositiveNumber);
  gen_polar_cmd->add_option("--rings", polar_opts.rings, "radial samples");
  gen_polar_cmd->add_option("--angles", polar_opts.angles, "angular samples per ring");
  gen_polar_cmd->add_option("--M", polar_opts.M, "max angular index (default (angles-1)/2)");
  gen_polar_cmd->add_flag("--real", polar_opts.real, "real-valued images");
  gen_polar_cmd->add_option("--seed", polar_opts.seed, "RNG seed");
  gen_polar_cmd->add_option("--output", polar_opts.output, "SGL1 path")->required();

  // ---- harmonics ----
  struct {
    std::string input;
    double epsilon = 1.0;
    int K = 256;
    int blocks = -1;
    bool debias = false;
    bool density = false;
    double sparsify = -1.0;
    bool unnormalized = false;
    std::string spectrum;
    std::string basis;
    std::string affinity;
  } harm_opts;
  auto* harm = app.add_subcommand("harmonics", "steerable manifold harmonics of a dataset");
  harm->add_option("--input", harm_opts.input, "SGL1 dataset")->required();
  harm->add_option("--epsilon", harm_opts.epsilon, "Gaussian kernel width")->required();
  harm->add_option("--K", harm_opts.K, "angular quadrature size");
  harm->add_option("--blocks-m", harm_opts.blocks, "Fourier block range (default: layout M)");
  harm->add_flag("--debias,!--no-debias", harm_opts.debias, "zero the affinity diagonal");
  harm->add_flag("--density-normalize", harm_opts.density, "density normalization");
  harm->add_option("--sparsify", harm_opts.sparsify, "zero affinities below this value");
  harm->add_flag("--unnormalized", harm_opts.unnormalized,
                 "decompose D - W instead of I - D^{-1} W");
  harm->add_option("--spectrum", harm_opts.spectrum, "spectrum CSV path")->required();
  harm->add_option("--basis", harm_opts.basis, "basis file (SGB1) path");
  harm->add_option("--affinity", harm_opts.affinity, "affinity dump (SGA1) path");

  // ---- filter ----
  struct {
    std::string input;
    double lambda_c = 0.0;
    std::string basis;
    double epsilon = 0.0;
    int K = 256;
    bool debias = false;
    bool density = false;
    std::string output;
    std::string diagnostics;
  } filter_opts;
  auto* filt = app.add_subcommand("filter", "low-pass filter a dataset by its harmonics");
  filt->add_option("--input", filter_opts.input, "SGL1 dataset")->required();
  filt->add_option("--lambda-c", filter_opts.lambda_c, "cut-off frequency")->required();
  filt->add_option("--basis", filter_opts.basis, "precomputed basis (SGB1)");
  filt->add_option("--epsilon", filter_opts.epsilon, "kernel width (inline basis)");
  filt->add_option("--K", filter_opts.K, "angular quadrature size");
  filt->add_flag("--debias,!--no-debias", filter_opts.debias, "zero the affinity diagonal");
  filt->add_flag("--density-normalize", filter_opts.density, "density normalization");
  filt->add_option("--output", filter_opts.output, "filtered SGL1 path")->required();
  filt->add_option("--diagnostics", filter_opts.diagnostics, "per-m diagnostics CSV");

  // ---- xval ----
  struct {
    std::string input;
    double sigma2 = 0.0;
    std::vector<double> eps_grid;
    std::vector<double> lambda_grid;
    int K = 256;
    double split = 0.8;
    std::uint64_t seed = 0;
    bool debias = true;
    bool density = false;
    std::string output;
  } xval_opts;
  auto* xv = app.add_subcommand("xval", "grid-search epsilon and lambda_c by held-out likelihood");
  xv->add_option("--input", xval_opts.input, "noisy SGL1 dataset")->required();
  xv->add_option("--sigma2", xval_opts.sigma2, "noise variance")->required();
  xv->add_option("--eps-grid", xval_opts.eps_grid, "epsilon candidates")
      ->required()
      ->delimiter(',');
  xv->add_option("--lambda-grid", xval_opts.lambda_grid, "lambda_c candidates")
      ->required()
      ->delimiter(',');
  xv->add_option("--K", xval_opts.K, "angular quadrature size");
  xv->add_option("--split", xval_opts.split, "denoising split fraction");
  xv->add_option("--seed", xval_opts.seed, "split shuffle seed");
  xv->add_flag("--debias,!--no-debias", xval_opts.debias, "debias during denoising");
  xv->add_flag("--density-normalize", xval_opts.density, "density normalization");
  xv->add_option("--output", xval_opts.output, "table CSV path")->required();

  // ---- bench-convergence ----
  struct {
    int n = 2000;
    int K = 256;
    int trials = 20;
    std::uint64_t seed = 0;
    std::vector<double> eps_grid;
    std::string output;
  } conv_opts;
  auto* conv =
      app.add_subcommand("bench-convergence", "sphere benchmark of both Laplacian estimators");
  conv->add_option("--n", conv_opts.n, "sample count per trial");
  conv->add_option("--K", conv_opts.K, "angular quadrature size");
  conv->add_option("--trials", conv_opts.trials, "number of trials")->check(CLI::PositiveNumber);
  conv->add_option("--seed", conv_opts.seed, "base seed");
  conv->add_option("--eps-grid", conv_opts.eps_grid, "epsilon grid (default 2^-4..2^2)")
      ->delimiter(',');
  conv->add_option("--output", conv_opts.output, "CSV path")->required();

  // ---- bench-noise ----
  struct {
    int n = 2000;
    double gamma = 0.1;
    std::vector<int> d_grid = {4, 10, 30, 100};
    double epsilon = std::pow(2.0, -0.75);
    int trials = 8;
    int K = 256;
    std::uint64_t seed = 0;
    std::string output;
  } noise_opts;
  auto* noise =
      app.add_subcommand("bench-noise", "high-dimensional noise robustness of the estimator");
  noise->add_option("--n", noise_opts.n, "sample count per trial");
  noise->add_option("--gamma", noise_opts.gamma, "total noise magnitude D*sigma2");
  noise->add_option("--d-grid", noise_opts.d_grid, "ambient dimensions")->delimiter(',');
  noise->add_option("--epsilon", noise_opts.epsilon, "kernel width");
  noise->add_option("--trials", noise_opts.trials, "trials per dimension");
  noise->add_option("--K", noise_opts.K, "angular quadrature size");
  noise->add_option("--seed", noise_opts.seed, "base seed");
  noise->add_option("--output", noise_opts.output, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitConfig;
  }
  if (threads > 0) sgl::set_max_threads(threads);

  try {
    if (gen_sphere_cmd->parsed()) {
      ManifestWriter manifest("gen sphere", argc, argv);
      auto& opts = sphere_opts;
      auto ds = sgl::gen_sphere(opts.n, opts.seed);
      if (opts.embed_dim > 0) ds = sgl::embed_orthogonal(ds, opts.embed_dim, opts.embed_seed);
      if (opts.noise_sigma2 > 0) ds = sgl::add_noise(ds, {opts.noise_sigma2, opts.noise_seed});
      sgl::save_sgl1(opts.output, ds);
      manifest.doc["config"] = {{"n", opts.n},
                                {"seed", opts.seed},
                                {"noise_sigma2", opts.noise_sigma2},
                                {"noise_seed", opts.noise_seed},
                                {"embed_dim", opts.embed_dim},
                                {"embed_seed", opts.embed_seed}};
      manifest.output(opts.output);
      manifest.write(opts.output);
      std::printf("wrote %s (N=%d, D=%d)\n", opts.output.c_str(), ds.n(), ds.layout.D);
    } else if (gen_polar_cmd->parsed()) {
      ManifestWriter manifest("gen polar", argc, argv);
      auto& opts = polar_opts;
      auto ds = gen_polar_dataset(opts.n, opts.rings, opts.angles, opts.M, opts.real, opts.seed);
      sgl::save_sgl1(opts.output, ds);
      manifest.doc["config"] = {{"n", opts.n},           {"rings", opts.rings},
                                {"angles", opts.angles}, {"M", opts.M},
                                {"real", opts.real},     {"seed", opts.seed}};
      manifest.output(opts.output);
      manifest.write(opts.output);
      std::printf("wrote %s (N=%d, D=%d, M=%d)\n", opts.output.c_str(), ds.n(), ds.layout.D,
                  ds.layout.M);
    } else if (harm->parsed()) {
      ManifestWriter manifest("harmonics", argc, argv);
      auto& opts = harm_opts;
      auto ds = sgl::load_sgl1(opts.input);
      sgl::KernelConfig config;
      config.epsilon = opts.epsilon;
      config.K = opts.K;
      config.m_max = opts.blocks;
      config.debias = opts.debias;
      config.density_normalize = opts.density;
      if (opts.sparsify >= 0) config.sparsify_threshold = opts.sparsify;
      auto fa = sgl::fourier_blocks(ds, config);
      auto basis = sgl::decompose(fa, !opts.unnormalized);
      sgl::save_spectrum_csv(opts.spectrum, sgl::eigenvalue_spectrum(basis));
      manifest.output(opts.spectrum);
      if (!opts.basis.empty()) {
        sgl::save_basis(opts.basis, basis);
        manifest.output(opts.basis);
      }
      if (!opts.affinity.empty()) {
        sgl::save_sga1(opts.affinity, fa);
        manifest.output(opts.affinity);
      }
      manifest.input(opts.input);
      manifest.doc["config"] = kernel_config_json(config);
      manifest.doc["config"]["normalized"] = !opts.unnormalized;
      manifest.write(opts.spectrum);
      std::printf("wrote %s (N=%d, blocks m=-%d..%d)\n", opts.spectrum.c_str(), ds.n(), fa.M,
                  fa.M);
    } else if (filt->parsed()) {
      ManifestWriter manifest("filter", argc, argv);
      auto& opts = filter_opts;
      auto ds = sgl::load_sgl1(opts.input);
      sgl::HarmonicBasis basis;
      if (!opts.basis.empty()) {
        basis = sgl::load_basis(opts.basis);
        manifest.input(opts.basis);
        manifest.doc["config"]["basis"] = opts.basis;
      } else {
        if (!(opts.epsilon > 0))
          throw sgl::ConfigError("filter: provide --basis or a positive --epsilon");
        sgl::KernelConfig config;
        config.epsilon = opts.epsilon;
        config.K = opts.K;
        config.debias = opts.debias;
        config.density_normalize = opts.density;
        basis = sgl::decompose(sgl::fourier_blocks(ds, config), true);
        manifest.doc["config"] = kernel_config_json(config);
      }
      auto result = sgl::filter_dataset(ds, basis, opts.lambda_c);
      sgl::save_sgl1(opts.output, result.filtered);
      manifest.input(opts.input);
      manifest.output(opts.output);
      manifest.doc["config"]["lambda_c"] = opts.lambda_c;
      manifest.doc["degenerate_cutoff"] = result.degenerate_cutoff;
      if (!opts.diagnostics.empty()) {
        std::vector<std::string> rows;
        for (int m = -ds.layout.M; m <= ds.layout.M; ++m) {
          std::ostringstream row;
          row << m << ',' << result.plan.k_of(m) << ','
              << fmt(result.residuals[static_cast<std::size_t>(m + ds.layout.M)]) << ','
              << (std::find(result.rank_deficient_m.begin(), result.rank_deficient_m.end(), m) !=
                          result.rank_deficient_m.end()
                      ? 1
                      : 0);
          rows.push_back(row.str());
        }
        write_csv(opts.diagnostics, "m,k_m,residual,rank_deficient", rows);
        manifest.output(opts.diagnostics);
      }
      manifest.write(opts.output);
      if (result.degenerate_cutoff)
        std::fprintf(stderr, "warning: lambda_c falls inside an eigenvalue cluster\n");
      std::printf("wrote %s (M_eff=%d)\n", opts.output.c_str(), result.plan.M_eff);
    } else if (xv->parsed()) {
      ManifestWriter manifest("xval", argc, argv);
      auto& opts = xval_opts;
      auto noisy_ds = sgl::load_sgl1(opts.input);
      sgl::XvalConfig config;
      config.split_fraction = opts.split;
      config.eps_grid = opts.eps_grid;
      config.lambda_grid = opts.lambda_grid;
      config.K = opts.K;
      config.sigma2 = opts.sigma2;
      config.seed = opts.seed;
      config.debias = opts.debias;
      config.density_normalize = opts.density;
      auto result = sgl::grid_search(noisy_ds, config);
      std::vector<std::string> rows;
      for (const auto& cell : result.table)
        rows.push_back(fmt(cell.epsilon) + "," + fmt(cell.lambda_c) + "," + fmt(cell.J));
      write_csv(opts.output, "epsilon,lambda_c,J", rows);
      manifest.input(opts.input);
      manifest.output(opts.output);
      manifest.doc["config"] = {
          {"split_fraction", opts.split},  {"K", opts.K},
          {"sigma2", opts.sigma2},         {"seed", opts.seed},
          {"debias", opts.debias},         {"density_normalize", opts.density},
          {"eps_grid", opts.eps_grid},     {"lambda_grid", opts.lambda_grid}};
      manifest.doc["argmax"] = {{"epsilon", result.eps_opt},
                                {"lambda_c", result.lambda_opt},
                                {"J", result.J_opt}};
      manifest.write(opts.output);
      std::printf("argmax: epsilon=%.17g lambda_c=%.17g J=%.17g\n", result.eps_opt,
                  result.lambda_opt, result.J_opt);
    } else if (conv->parsed()) {
      ManifestWriter manifest("bench-convergence", argc, argv);
      auto& opts = conv_opts;
      auto grid = opts.eps_grid.empty() ? sgl::default_epsilon_grid() : opts.eps_grid;
      auto report = sgl::convergence_experiment(opts.n, opts.K, grid, opts.trials, opts.seed);
      std::vector<std::string> rows;
      for (std::size_t e = 0; e < report.epsilons.size(); ++e)
        rows.push_back(fmt(report.epsilons[e]) + "," + fmt(report.errors_steerable[e]) + "," +
                       fmt(report.errors_standard[e]));
      write_csv(opts.output, "epsilon,err_steerable,err_standard", rows);
      manifest.output(opts.output);
      manifest.doc["config"] = {{"n", opts.n},
                                {"K", opts.K},
                                {"trials", opts.trials},
                                {"seed", opts.seed},
                                {"eps_grid", grid}};
      manifest.doc["slopes"] = {{"steerable", report.slope_steerable},
                                {"standard", report.slope_standard},
                                {"region_split", report.region_split}};
      manifest.write(opts.output);
      std::printf("slopes: steerable=%.4f standard=%.4f (split index %d)\n",
                  report.slope_steerable, report.slope_standard, report.region_split);
    } else if (noise->parsed()) {
      ManifestWriter manifest("bench-noise", argc, argv);
      auto& opts = noise_opts;
      auto rows_data = sgl::noise_robustness_experiment(
          opts.n, opts.gamma, opts.d_grid, opts.epsilon, opts.seed, opts.trials, opts.K);
      std::vector<std::string> rows;
      for (const auto& row : rows_data)
        rows.push_back(std::to_string(row.D) + "," + fmt(row.sigma2) + "," +
                       fmt(row.err_noisy) + "," + fmt(row.err_clean));
      write_csv(opts.output, "D,sigma2,err_noisy,err_clean", rows);
      manifest.output(opts.output);
      manifest.doc["config"] = {{"n", opts.n},           {"gamma", opts.gamma},
                                {"d_grid", opts.d_grid}, {"epsilon", opts.epsilon},
                                {"trials", opts.trials}, {"K", opts.K},
                                {"seed", opts.seed}};
      manifest.write(opts.output);
      for (const auto& row : rows_data)
        std::printf("D=%d err_noisy=%.5f err_clean=%.5f\n", row.D, row.err_noisy, row.err_clean);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return exit_code_for(err);
  }
  return kExitOk;
}
