#include "semibias/inference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "semibias/normal.hpp"
#include "semibias/parallel.hpp"
#include "semibias/smoothing.hpp"
#include "semibias/summation.hpp"

namespace semibias {

double plug_in_variance(std::span<const double> gamma_values) {
  return 4.0 * sample_variance(gamma_values, 1);
}

VarianceEstimate variance_ad(const Dataset& data, const Kernel& kernel,
                             double h) {
  const std::vector<double> values = loo_kde_values(data, kernel, h);
  return {plug_in_variance(values), VarianceMethod::PlugInAD, 0};
}

VarianceEstimate variance_isd(const Dataset& data, const Kernel& kernel,
                              double h) {
  const std::vector<double> values = kde_values_at_points(data, kernel, h);
  return {plug_in_variance(values), VarianceMethod::PlugInISD, 0};
}

UStatVariance ustat_variance_from_pairs(std::span<const double> pair_values,
                                        std::size_t n) {
  if (n < 3) throw std::invalid_argument("ustat_variance_from_pairs: n >= 3 required");
  if (pair_values.size() != n * n) {
    throw std::invalid_argument("ustat_variance_from_pairs: matrix size mismatch");
  }
  const double dn = static_cast<double>(n);

  std::vector<double> row_mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    PairwiseAccumulator acc;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) acc.add(pair_values[i * n + j]);
    }
    row_mean[i] = acc.total() / (dn - 1.0);
  }

  UStatVariance out;
  out.theta = sample_mean(row_mean);
  const double var_rows = sample_variance(row_mean, 1);

  PairwiseAccumulator resid_sq;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = pair_values[i * n + j] - row_mean[i] - row_mean[j] + out.theta;
      resid_sq.add(r * r);
    }
  }
  out.delta2_hat = resid_sq.total() / (0.5 * dn * (dn - 1.0));

  // E[Var(L_i)] = ((n-2)/(n-1))^2 zeta_1 + delta^2 (n-2)/(n-1)^2; invert for
  // zeta_1, then assemble n Var(theta) = 4 zeta_1 + 2 delta^2/(n-1).
  const double ratio = (dn - 1.0) / (dn - 2.0);
  const double zeta1_hat = ratio * ratio * var_rows - out.delta2_hat / (dn - 2.0);
  out.projection_term = 4.0 * std::max(0.0, zeta1_hat);
  out.degenerate_term = 2.0 * out.delta2_hat / (dn - 1.0);
  return out;
}

std::vector<double> dwad_pair_values(const Dataset& data, const Kernel& kernel,
                                     double h, int component) {
  if (!data.has_responses()) {
    throw std::invalid_argument("dwad_pair_values: responses are required");
  }
  if (!(h > 0.0)) throw std::invalid_argument("dwad_pair_values: bandwidth must be positive");
  if (component < 0 || component >= data.dim()) {
    throw std::invalid_argument("dwad_pair_values: component index out of range");
  }
  const std::size_t n = data.size();
  const int d = data.dim();
  const double inv_h = 1.0 / h;
  const double scale = std::pow(h, -(d + 1));
  std::vector<double> pairs(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double s = (data.coord(j, c) - data.coord(i, c)) * inv_h;
        r2 += s * s;
      }
      const double u_c = (data.coord(j, component) - data.coord(i, component)) * inv_h;
      const double u =
          scale * u_c * kernel.gradient_factor_r2(r2) * (data.response(i) - data.response(j));
      pairs[i * n + j] = u;
      pairs[j * n + i] = u;
    }
  }
  return pairs;
}

VarianceEstimate variance_dwad(const Dataset& data, const Kernel& kernel,
                               double h, int component) {
  const std::vector<double> pairs = dwad_pair_values(data, kernel, h, component);
  const UStatVariance u = ustat_variance_from_pairs(pairs, data.size());
  return {u.sigma(), VarianceMethod::UStatDWAD, 0};
}

VarianceEstimate bootstrap_variance(
    const std::function<double(const Dataset&)>& estimate, const Dataset& data,
    int P, RngStream stream, int threads) {
  if (P < 2) throw std::invalid_argument("bootstrap_variance: P >= 2 required");
  if (data.size() == 0) throw std::invalid_argument("bootstrap_variance: empty sample");

  std::vector<double> estimates(static_cast<std::size_t>(P));
  parallel_for(static_cast<std::size_t>(P), threads, [&](std::size_t p) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      RngStream rng = stream.derive(p).derive(static_cast<std::uint64_t>(attempt));
      const Dataset resample =
          data.resample([&rng](std::size_t n) { return rng.next_below(n); });
      try {
        estimates[p] = estimate(resample);
        return;
      } catch (const std::exception& e) {
        if (attempt == 1) {
          throw std::runtime_error("bootstrap replicate " + std::to_string(p) +
                                   " failed twice: " + e.what());
        }
      }
    }
  });

  const double sigma =
      static_cast<double>(data.size()) * sample_variance(estimates, 1);
  return {sigma, VarianceMethod::Bootstrap, P};
}

std::pair<double, double> confidence_interval(double theta, double sigma,
                                              std::size_t n, double level) {
  if (sigma < 0.0) throw std::invalid_argument("confidence_interval: sigma must be nonnegative");
  if (n < 1) throw std::invalid_argument("confidence_interval: n >= 1 required");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_interval: level must lie in (0,1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(sigma / static_cast<double>(n));
  return {theta - half, theta + half};
}

double t_statistic(double theta, double theta0, double sigma, std::size_t n) {
  if (!(sigma > 0.0)) throw std::invalid_argument("t_statistic: sigma must be positive");
  return std::sqrt(static_cast<double>(n)) * (theta - theta0) / std::sqrt(sigma);
}

}  // namespace semibias
