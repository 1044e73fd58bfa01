#pragma once

#include <functional>
#include <span>
#include <vector>

#include "semibias/dataset.hpp"
#include "semibias/kernels.hpp"

namespace semibias {

// Trapezoid integration grid on an interval; `points` counts nodes, so a
// 500-point grid has 499 subintervals.
struct GridSpec {
  double lower = 0.0;
  double upper = 1.0;
  int points = 500;
};

// Default grid for density-functional integrals:
// [min(z) - pad, max(z) + pad] with 500 nodes.
GridSpec default_integration_grid(const Dataset& data, double pad = 4.0,
                                  int points = 500);

// Trapezoid-rule integral of f over the grid (univariate).
double grid_integrate(const std::function<double(double)>& f,
                      const GridSpec& grid);

// Full-sample kernel density estimate (1/n) sum_i K_h(x - z_i). Permits a
// single-point sample: it is also evaluated on bootstrap resamples and grid
// points where the leave-one-out restriction does not apply.
double kde(const Dataset& data, const Kernel& kernel, double h,
           std::span<const double> x);

// Leave-one-out estimate (1/(n-1)) sum_{j != i} K_h(z_i - z_j). n >= 2.
double loo_kde(const Dataset& data, const Kernel& kernel, double h,
               std::size_t i);

// All leave-one-out values in one O(n^2) pass (each ordered pair is
// evaluated once and credited to both rows).
std::vector<double> loo_kde_values(const Dataset& data, const Kernel& kernel,
                                   double h);

// Full-sample KDE evaluated at every sample point.
std::vector<double> kde_values_at_points(const Dataset& data,
                                         const Kernel& kernel, double h);

// Leave-one-out density gradient at z_i:
//   -(1/((n-1) h^{d+1})) sum_{j != i} grad K((z_j - z_i)/h).
std::vector<double> kde_gradient(const Dataset& data, const Kernel& kernel,
                                 double h, std::size_t i);

// Smoothed ("hat-bar") leave-one-out estimate: the same sum with the
// self-convolved kernel, (1/(n-1)) sum_{j != i} (K*K)_h(z_i - z_j).
double smoothed_loo_kde(const Dataset& data, const Kernel& kernel, double h,
                        std::size_t i);

}  // namespace semibias
