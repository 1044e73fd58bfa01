#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "semibias/dataset.hpp"
#include "semibias/kernels.hpp"
#include "semibias/rng.hpp"

namespace semibias {

enum class VarianceMethod { PlugInAD, PlugInISD, UStatDWAD, Bootstrap };

// Estimate of the asymptotic variance of sqrt(n) (theta_hat - theta_0).
struct VarianceEstimate {
  double sigma_hat = 0.0;  // always >= 0
  VarianceMethod method = VarianceMethod::PlugInAD;
  int bootstrap_replicates = 0;
};

// 4 x sample variance of the leave-one-out density values (plug-in for
// 4 Var[gamma_0(z)], the average-density influence variance).
VarianceEstimate variance_ad(const Dataset& data, const Kernel& kernel,
                             double h);

// Same plug-in built from full-sample KDE values at the sample points.
VarianceEstimate variance_isd(const Dataset& data, const Kernel& kernel,
                              double h);

// The shared statistic behind the two plug-ins.
double plug_in_variance(std::span<const double> gamma_values);

// Variance machinery for degree-2 U-statistics (the density-weighted
// average derivative and its jackknife combinations).
//
// With symmetric pair kernel U_ij, row means L_i = (1/(n-1)) sum_{j!=i} U_ij
// and theta = mean(L_i), the exact identity
//
//     n Var(theta_hat) = 4 zeta_1 + 2 delta^2 / (n-1),
//
// holds, where zeta_1 is the variance of the Hajek projection and delta^2
// the degenerate-component second moment. The naive plug-in Var(L_i)
// overshoots zeta_1 by approximately delta^2/n, which inflates coverage when
// n h^{d+2} is small, so the projection part is debiased before the
// degenerate correction term is added back. This estimator is a
// reconstruction from the Hoeffding decomposition, not a transcription of a
// published formula; see README for details.
struct UStatVariance {
  double theta = 0.0;             // the U-statistic itself
  double projection_term = 0.0;   // 4 * debiased projection variance
  double degenerate_term = 0.0;   // 2 * delta2_hat / (n-1), nonnegative
  double delta2_hat = 0.0;        // mean over pairs of squared residuals
  double sigma() const { return projection_term + degenerate_term; }
};

// Summary from an explicit symmetric pair-kernel matrix (row-major n x n,
// diagonal ignored).
UStatVariance ustat_variance_from_pairs(std::span<const double> pair_values,
                                        std::size_t n);

// Pair-kernel matrix for the DWAD estimator:
//   U_ij = h^{-(d+1)} dK_c((x_j - x_i)/h) (y_i - y_j).
std::vector<double> dwad_pair_values(const Dataset& data, const Kernel& kernel,
                                     double h, int component);

VarianceEstimate variance_dwad(const Dataset& data, const Kernel& kernel,
                               double h, int component);

// Nonparametric bootstrap: P resamples with replacement, re-estimation on
// each, and n x sample variance of the P values. Replicate p draws from the
// stream (seed path, p, attempt); a replicate whose estimator throws is
// retried once with a fresh draw, after which the failure propagates.
// Deterministic given (data, P, stream key), independent of thread count.
VarianceEstimate bootstrap_variance(
    const std::function<double(const Dataset&)>& estimate, const Dataset& data,
    int P, RngStream stream, int threads = 1);

// theta +/- z_{(1+level)/2} sqrt(sigma/n).
std::pair<double, double> confidence_interval(double theta, double sigma,
                                              std::size_t n, double level);

// sqrt(n) (theta - theta0) / sqrt(sigma); sigma must be positive.
double t_statistic(double theta, double theta0, double sigma, std::size_t n);

}  // namespace semibias
