#pragma once

#include <cstddef>

#include "semibias/dataset.hpp"
#include "semibias/kernels.hpp"
#include "semibias/smoothing.hpp"

namespace semibias {

enum class EstimatorKind { AverageDensity, IntegratedSquaredDensity, DensityWeightedAvgDerivative };

// Average density estimator, leave-one-out form:
//   (1/n) sum_i loo_kde_i = (1/(n(n-1))) sum_{i != j} K_h(z_i - z_j).
double ad_estimate(const Dataset& data, const Kernel& kernel, double h);

// Full-sample variant (1/n) sum_i kde(z_i). Carries the K(0)/(n h^d)
// singularity term; exposed for demonstrating that bias, not for inference.
double ad_estimate_full_sample(const Dataset& data, const Kernel& kernel,
                               double h);

// Integrated squared density, integral of kde(x)^2 over the grid
// (univariate only).
double isd_estimate(const Dataset& data, const Kernel& kernel, double h,
                    const GridSpec& grid);

// Exact value of the same integral via the convolution identity
//   int kde^2 = (1/n^2) sum_{i,j} (K*K)_h(z_i - z_j),
// diagonal terms included. Serves as the oracle for the grid path.
double isd_closed_form(const Dataset& data, const Kernel& kernel, double h);

// Density-weighted average derivative (component `component` of the
// gradient), pairwise double-sum form:
//   (2/(n(n-1))) sum_i sum_{j != i} h^{-(d+1)} dK_c((z_j - z_i)/h) y_i.
// Requires responses.
double dwad_estimate(const Dataset& data, const Kernel& kernel, double h,
                     int component);

}  // namespace semibias
