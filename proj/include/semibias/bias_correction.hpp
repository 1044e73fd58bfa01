#pragma once

#include <functional>
#include <span>
#include <vector>

#include "semibias/dataset.hpp"
#include "semibias/estimators.hpp"
#include "semibias/kernels.hpp"
#include "semibias/smoothing.hpp"

namespace semibias {

// Multi-scale jackknife scheme: estimates computed at bandwidths
// h_q = eta_q * h are combined with weights solving
//
//   sum_q w_q = 1,   sum_q w_q eta_q^p = 0  for each rate exponent p.
//
// A bias component of order h^p contributes row exponent p; the
// nonlinear/singularity component of order 1/(n h^d) contributes exponent
// -d. Exact zeroing is enforced at the solved weights (the asymptotic
// o(n^{-1/2}) requirement is implied).
struct JackknifeScheme {
  std::vector<double> etas;
  std::vector<double> exponents;
  std::vector<double> weights;
  double base_bandwidth = 1.0;
};

// Solves the (Q x Q) weight system. Requires len(etas) == len(exponents)+1
// and pairwise-distinct positive etas. Duplicate etas make the system
// singular -> std::invalid_argument. Severe ill-conditioning (condition
// estimate above 1e8) emits a warning on std::clog but still returns the
// solution; if condition_out is non-null the estimate is stored there.
std::vector<double> solve_msj_weights(std::span<const double> etas,
                                      std::span<const double> exponents,
                                      double* condition_out = nullptr);

JackknifeScheme make_scheme(std::vector<double> etas,
                            std::vector<double> exponents,
                            double base_bandwidth);

enum class MsjPreset {
  TwoScaleSmoothing,   // removes the h^m smoothing bias
  TwoScaleNonlinear,   // removes the 1/(n h^d) nonlinear/singularity bias
  ThreeScale,          // removes both
  FiveScaleEven,       // h^m, h^{m+2}, h^{m+4} and 1/(n h^d) (even kernels)
};

// Rate-exponent rows for the named presets given kernel order m and data
// dimension d.
std::vector<double> default_scheme_exponents(MsjPreset preset, int m, int d);

// sum_q w_q * estimate(eta_q * base_bandwidth).
double msj_estimate(const std::function<double(double)>& estimate_at_h,
                    const JackknifeScheme& scheme);

double msj_ad(const Dataset& data, const Kernel& kernel,
              const JackknifeScheme& scheme);
double msj_isd(const Dataset& data, const Kernel& kernel,
               const JackknifeScheme& scheme, const GridSpec& grid);
double msj_dwad(const Dataset& data, const Kernel& kernel,
                const JackknifeScheme& scheme, int component);

// Analytical bias corrections (twicing-kernel based). Each returns the
// plug-in bias estimate(s) together with the corrected point estimate;
// the corrected value always equals raw minus the reported terms.

struct AbcAdResult {
  double b_anb_hat = 0.0;  // mean_i [ smoothed_loo_i - loo_i ]
  double corrected = 0.0;  // == ad_estimate with the twicing kernel
};
AbcAdResult abc_ad(const Dataset& data, const Kernel& kernel, double h);

struct AbcIsdResult {
  double b_nl_hat = 0.0;   // (1/n^2) sum_i int K_h(x - z_i)^2 dx, closed form
  double b_anb_hat = 0.0;  // 2 int kde (kde_conv - kde) dx on the grid
  double corrected = 0.0;
};
AbcIsdResult abc_isd(const Dataset& data, const Kernel& kernel, double h,
                     const GridSpec& grid);

struct AbcDwadResult {
  double b_nl_hat = 0.0;   // smoothed-kernel estimate minus raw estimate
  double corrected = 0.0;  // == dwad_estimate with the twicing kernel
};
AbcDwadResult abc_dwad(const Dataset& data, const Kernel& kernel, double h,
                       int component);

}  // namespace semibias
