#include "sgl/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "sgl/errors.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined state.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("slope fit: need at least two samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw ConfigError("slope fit: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

std::vector<double> default_epsilon_grid() {
  std::vector<double> grid;
  for (double e = -4.0; e <= 2.0 + 1e-9; e += 0.5) grid.push_back(std::pow(2.0, e));
  return grid;
}

namespace {

int argmin(const std::vector<double>& v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

// Fits log(err) against log(eps) strictly left of the error minimum.
double variance_region_slope(const std::vector<double>& eps, const std::vector<double>& err) {
  const int split = argmin(err);
  if (split < 2)
    throw ConfigError("convergence experiment: too few grid points left of the error minimum");
  std::vector<double> lx, ly;
  for (int i = 0; i < split; ++i) {
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(err[i]));
  }
  return fit_slope(lx, ly);
}

}  // namespace

ConvergenceReport convergence_experiment(int N, int K, std::vector<double> eps_grid, int trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw ConfigError("convergence experiment: trials must be positive");
  if (eps_grid.size() < 3) throw ConfigError("convergence experiment: epsilon grid too small");
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end()))
    throw ConfigError("convergence experiment: epsilon grid must ascend");

  const int E = static_cast<int>(eps_grid.size());
  Eigen::MatrixXd err_st(trials, E), err_gl(trials, E);
  const RowVec base = sphere_point(1.0, 0.0, 0.0);  // f has surface Laplacian -2 here

  parallel_for_each(trials, [&](std::int64_t t) {
    SteerableDataset ds = prepend_point(gen_sphere(N, derive_seed(seed, t)), base);
    Eigen::MatrixXd pts = realify(ds);
    auto f_std = [](const Eigen::RowVectorXd& p) { return p(2) + p(0); };  // Re x11 + Re x01
    for (int e = 0; e < E; ++e) {
      KernelConfig config;
      config.epsilon = eps_grid[static_cast<std::size_t>(e)];
      config.K = K;
      err_st(t, e) = std::abs(estimate_laplace_beltrami(ds, sphere_test_function, 0, config) + 2.0);
      err_gl(t, e) = std::abs(
          standard_graph_laplacian_estimate(pts, f_std, 0, config.epsilon) + 2.0);
    }
  });

  ConvergenceReport report;
  report.epsilons = std::move(eps_grid);
  report.errors_steerable.resize(E);
  report.errors_standard.resize(E);
  for (int e = 0; e < E; ++e) {
    report.errors_steerable[static_cast<std::size_t>(e)] = err_st.col(e).mean();
    report.errors_standard[static_cast<std::size_t>(e)] = err_gl.col(e).mean();
  }
  report.region_split = argmin(report.errors_steerable);
  report.slope_steerable = variance_region_slope(report.epsilons, report.errors_steerable);
  report.slope_standard = variance_region_slope(report.epsilons, report.errors_standard);
  return report;
}

std::vector<NoiseRobustnessRow> noise_robustness_experiment(int N, double gamma,
                                                            const std::vector<int>& D_grid,
                                                            double epsilon, std::uint64_t seed,
                                                            int trials, int K) {
  if (gamma < 0) throw ConfigError("noise experiment: gamma must be non-negative");
  if (trials < 1) throw ConfigError("noise experiment: trials must be positive");
  const RowVec base = sphere_point(1.0, 0.0, 0.0);
  KernelConfig config;
  config.epsilon = epsilon;
  config.K = K;
  config.debias = true;

  const int nD = static_cast<int>(D_grid.size());
  Eigen::MatrixXd noisy_err(trials, nD);
  Eigen::VectorXd clean_err(trials);

  parallel_for_each(trials, [&](std::int64_t t) {
    const SteerableDataset clean = prepend_point(gen_sphere(N, derive_seed(seed, t)), base);
    clean_err(t) = std::abs(estimate_laplace_beltrami(clean, sphere_test_function, 0, config) + 2.0);
    for (int d = 0; d < nD; ++d) {
      const int D = D_grid[static_cast<std::size_t>(d)];
      const double sigma2 = D > 0 ? gamma / D : 0.0;
      BlockUnitary map =
          random_block_embedding(clean.layout, D, derive_seed(seed, (t + 1) * 7919 + d));
      SteerableDataset embedded = apply_embedding(clean, map);
      NoiseSpec spec{sigma2, derive_seed(seed, (t + 1) * 104729 + d)};
      SteerableDataset noisy = add_noise(embedded, spec);
      noisy.values.row(0) = embedded.values.row(0);  // the test point stays clean
      noisy_err(t, d) = std::abs(
          estimate_laplace_beltrami(noisy, embedded_test_function(sphere_test_function, map), 0,
                                    config) +
          2.0);
    }
  });

  std::vector<NoiseRobustnessRow> rows;
  for (int d = 0; d < nD; ++d) {
    NoiseRobustnessRow row;
    row.D = D_grid[static_cast<std::size_t>(d)];
    row.sigma2 = row.D > 0 ? gamma / row.D : 0.0;
    row.err_noisy = noisy_err.col(d).mean();
    row.err_clean = clean_err.mean();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sgl
