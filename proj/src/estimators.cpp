#include "semibias/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "semibias/summation.hpp"

namespace semibias {

double ad_estimate(const Dataset& data, const Kernel& kernel, double h) {
  const std::vector<double> values = loo_kde_values(data, kernel, h);
  return sample_mean(values);
}

double ad_estimate_full_sample(const Dataset& data, const Kernel& kernel,
                               double h) {
  const std::vector<double> values = kde_values_at_points(data, kernel, h);
  return sample_mean(values);
}

double isd_estimate(const Dataset& data, const Kernel& kernel, double h,
                    const GridSpec& grid) {
  if (data.dim() != 1) {
    throw std::invalid_argument("isd_estimate: univariate samples only");
  }
  return grid_integrate(
      [&](double x) {
        const double v = kde(data, kernel, h, {&x, 1});
        return v * v;
      },
      grid);
}

double isd_closed_form(const Dataset& data, const Kernel& kernel, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("isd_closed_form: bandwidth must be positive");
  const Kernel conv = kernel.self_convolution();
  const std::size_t n = data.size();
  const int d = data.dim();
  const double inv_h = 1.0 / h;
  PairwiseAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double s = (data.coord(i, c) - data.coord(j, c)) * inv_h;
        r2 += s * s;
      }
      acc.add(conv.eval_r2(r2));
    }
  }
  const double diag = static_cast<double>(n) * conv.at_zero();
  return (2.0 * acc.total() + diag) /
         (static_cast<double>(n) * static_cast<double>(n) * std::pow(h, d));
}

double dwad_estimate(const Dataset& data, const Kernel& kernel, double h,
                     int component) {
  if (!data.has_responses()) {
    throw std::invalid_argument("dwad_estimate: responses are required");
  }
  if (data.size() < 2) throw std::invalid_argument("dwad_estimate: n >= 2 required");
  if (!(h > 0.0)) throw std::invalid_argument("dwad_estimate: bandwidth must be positive");
  if (component < 0 || component >= data.dim()) {
    throw std::invalid_argument("dwad_estimate: component index out of range");
  }
  const std::size_t n = data.size();
  const int d = data.dim();
  const double inv_h = 1.0 / h;
  PairwiseAccumulator acc;
  // Pairwise form using gradient oddness:
  //   term(i,j) + term(j,i) = dK_c((z_j - z_i)/h) (y_i - y_j).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double s = (data.coord(j, c) - data.coord(i, c)) * inv_h;
        r2 += s * s;
      }
      const double u_c = (data.coord(j, component) - data.coord(i, component)) * inv_h;
      const double dk = u_c * kernel.gradient_factor_r2(r2);
      acc.add(dk * (data.response(i) - data.response(j)));
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return acc.total() / (pairs * std::pow(h, d + 1));
}

}  // namespace semibias
