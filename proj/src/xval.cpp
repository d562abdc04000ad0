#include "sgl/xval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sgl/errors.hpp"
#include "sgl/filter.hpp"
#include "sgl/harmonics.hpp"
#include "sgl/kernel.hpp"
#include "sgl/parallel.hpp"

namespace sgl {

double eps_rule_of_thumb(int D_total, double sigma2) {
  if (sigma2 < 0) throw ConfigError("eps rule of thumb: negative variance");
  return std::sqrt(static_cast<double>(D_total)) * sigma2;
}

double empirical_log_likelihood(const SteerableDataset& heldout,
                                const SteerableDataset& denoised, double sigma2, int K) {
  if (!(heldout.layout == denoised.layout))
    throw LayoutError("log-likelihood: layouts do not match");
  if (heldout.n() == 0 || denoised.n() == 0)
    throw ConfigError("log-likelihood: empty point sets");
  if (sigma2 <= 0) throw ConfigError("log-likelihood: sigma2 must be positive");
  if (K < 2 * heldout.layout.M + 1) throw ConfigError("log-likelihood: K below 2M+1");

  const int Nh = heldout.n();
  const int Nd = denoised.n();
  RotationGrid grid(heldout.layout, K, 0);
  RealVector norms_d(Nd);
  for (int j = 0; j < Nd; ++j) norms_d(j) = denoised.values.row(j).squaredNorm();

  RealVector per_point(Nh);
  parallel_for_each(Nh, [&](std::int64_t i) {
    const double norm_i = heldout.values.row(i).squaredNorm();
    Eigen::MatrixXd logs(K, Nd);
    Vector c;
    Eigen::ArrayXd dist;
    for (int j = 0; j < Nd; ++j) {
      grid.cross_correlation(heldout.values.row(i), denoised.values.row(j), c);
      grid.distances(norm_i, norms_d(j), c, dist);
      logs.col(j) = (-dist / (2.0 * sigma2)).matrix();
    }
    const double top = logs.maxCoeff();
    const double sum = (logs.array() - top).exp().sum();
    per_point(i) = top + std::log(2.0 * M_PI / K * sum);
  });
  return per_point.sum();
}

XvalResult grid_search(const SteerableDataset& noisy, const XvalConfig& config) {
  if (!(config.split_fraction > 0.0 && config.split_fraction < 1.0))
    throw ConfigError("grid search: split fraction must lie in (0, 1)");
  if (config.eps_grid.empty() || config.lambda_grid.empty())
    throw ConfigError("grid search: empty parameter grid");
  if (config.sigma2 <= 0) throw ConfigError("grid search: sigma2 must be positive");
  if (noisy.n() < 2) throw ConfigError("grid search: need at least two points");

  std::vector<int> order(static_cast<std::size_t>(noisy.n()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_denoise = std::clamp(
      static_cast<int>(std::lround(config.split_fraction * noisy.n())), 1, noisy.n() - 1);

  auto take = [&](int begin, int count) {
    SteerableDataset part;
    part.layout = noisy.layout;
    part.is_real = noisy.is_real;
    part.values.resize(count, noisy.layout.D);
    for (int r = 0; r < count; ++r)
      part.values.row(r) = noisy.values.row(order[static_cast<std::size_t>(begin + r)]);
    return part;
  };
  const SteerableDataset denoise_split = take(0, n_denoise);
  const SteerableDataset heldout = take(n_denoise, noisy.n() - n_denoise);

  XvalResult result;
  result.J_opt = -std::numeric_limits<double>::infinity();
  for (double eps : config.eps_grid) {
    bool basis_ok = false;
    HarmonicBasis basis;
    try {
      KernelConfig kc;
      kc.epsilon = eps;
      kc.K = config.K;
      kc.debias = config.debias;
      kc.density_normalize = config.density_normalize;
      basis = decompose(fourier_blocks(denoise_split, kc), true);
      basis_ok = true;
    } catch (const Error&) {
      basis_ok = false;
    }
    for (double lambda_c : config.lambda_grid) {
      double J = -std::numeric_limits<double>::infinity();
      if (basis_ok) {
        try {
          FilterResult fr = filter_dataset(denoise_split, basis, lambda_c);
          J = empirical_log_likelihood(heldout, fr.filtered, config.sigma2, config.K);
        } catch (const Error&) {
          J = -std::numeric_limits<double>::infinity();
        }
      }
      result.table.push_back({eps, lambda_c, J});
      if (J > result.J_opt) {
        result.J_opt = J;
        result.eps_opt = eps;
        result.lambda_opt = lambda_c;
      }
    }
  }
  if (!std::isfinite(result.J_opt))
    throw NumericalError("grid search: every cell failed; widen the grids or epsilon");
  return result;
}

}  // namespace sgl
