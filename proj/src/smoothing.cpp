#include "semibias/smoothing.hpp"

#include <cmath>
#include <stdexcept>

#include "semibias/summation.hpp"

namespace semibias {

namespace {

void check_loo_args(const Dataset& data, double h, std::size_t i) {
  if (data.size() < 2) {
    throw std::invalid_argument("leave-one-out estimators require n >= 2");
  }
  if (i >= data.size()) throw std::out_of_range("sample index out of range");
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
}

// Squared distance between points scaled by 1/h.
inline double scaled_r2(const Dataset& data, std::size_t i, std::size_t j,
                        double inv_h) {
  double r2 = 0.0;
  for (int c = 0; c < data.dim(); ++c) {
    const double s = (data.coord(i, c) - data.coord(j, c)) * inv_h;
    r2 += s * s;
  }
  return r2;
}

}  // namespace

GridSpec default_integration_grid(const Dataset& data, double pad, int points) {
  return GridSpec{data.min_coord() - pad, data.max_coord() + pad, points};
}

double grid_integrate(const std::function<double(double)>& f,
                      const GridSpec& grid) {
  if (!(grid.lower < grid.upper)) {
    throw std::invalid_argument("grid_integrate: lower bound must be below upper");
  }
  if (grid.points < 2) throw std::invalid_argument("grid_integrate: need at least 2 points");
  const double step = (grid.upper - grid.lower) / (grid.points - 1);
  PairwiseAccumulator acc;
  acc.add(0.5 * f(grid.lower));
  for (int i = 1; i + 1 < grid.points; ++i) acc.add(f(grid.lower + i * step));
  acc.add(0.5 * f(grid.upper));
  return acc.total() * step;
}

double kde(const Dataset& data, const Kernel& kernel, double h,
           std::span<const double> x) {
  if (data.size() == 0) throw std::invalid_argument("kde: empty sample");
  if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
  if (static_cast<int>(x.size()) != data.dim() || data.dim() != kernel.dim()) {
    throw std::invalid_argument("kde: dimension mismatch");
  }
  const double inv_h = 1.0 / h;
  PairwiseAccumulator acc;
  for (std::size_t j = 0; j < data.size(); ++j) {
    double r2 = 0.0;
    for (int c = 0; c < data.dim(); ++c) {
      const double s = (x[c] - data.coord(j, c)) * inv_h;
      r2 += s * s;
    }
    acc.add(kernel.eval_r2(r2));
  }
  return acc.total() / (static_cast<double>(data.size()) * std::pow(h, data.dim()));
}

double loo_kde(const Dataset& data, const Kernel& kernel, double h,
               std::size_t i) {
  check_loo_args(data, h, i);
  const double inv_h = 1.0 / h;
  PairwiseAccumulator acc;
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (j == i) continue;
    acc.add(kernel.eval_r2(scaled_r2(data, i, j, inv_h)));
  }
  return acc.total() /
         (static_cast<double>(data.size() - 1) * std::pow(h, data.dim()));
}

std::vector<double> loo_kde_values(const Dataset& data, const Kernel& kernel,
                                   double h) {
  check_loo_args(data, h, 0);
  const std::size_t n = data.size();
  const double inv_h = 1.0 / h;
  std::vector<PairwiseAccumulator> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel.eval_r2(scaled_r2(data, i, j, inv_h));
      acc[i].add(v);
      acc[j].add(v);
    }
  }
  const double scale = 1.0 / (static_cast<double>(n - 1) * std::pow(h, data.dim()));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].total() * scale;
  return out;
}

std::vector<double> kde_values_at_points(const Dataset& data,
                                         const Kernel& kernel, double h) {
  if (data.size() == 0) throw std::invalid_argument("kde: empty sample");
  if (!(h > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
  const std::size_t n = data.size();
  const double inv_h = 1.0 / h;
  const double self = kernel.at_zero();
  std::vector<PairwiseAccumulator> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel.eval_r2(scaled_r2(data, i, j, inv_h));
      acc[i].add(v);
      acc[j].add(v);
    }
  }
  const double scale = 1.0 / (static_cast<double>(n) * std::pow(h, data.dim()));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (acc[i].total() + self) * scale;
  return out;
}

std::vector<double> kde_gradient(const Dataset& data, const Kernel& kernel,
                                 double h, std::size_t i) {
  check_loo_args(data, h, i);
  const int d = data.dim();
  const double inv_h = 1.0 / h;
  std::vector<PairwiseAccumulator> acc(d);
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (j == i) continue;
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) {
      const double s = (data.coord(j, c) - data.coord(i, c)) * inv_h;
      r2 += s * s;
    }
    const double g = kernel.gradient_factor_r2(r2);
    for (int c = 0; c < d; ++c) {
      acc[c].add((data.coord(j, c) - data.coord(i, c)) * inv_h * g);
    }
  }
  const double scale =
      -1.0 / (static_cast<double>(data.size() - 1) * std::pow(h, d + 1));
  std::vector<double> out(d);
  for (int c = 0; c < d; ++c) out[c] = acc[c].total() * scale;
  return out;
}

double smoothed_loo_kde(const Dataset& data, const Kernel& kernel, double h,
                        std::size_t i) {
  return loo_kde(data, kernel.self_convolution(), h, i);
}

}  // namespace semibias
