#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semibias/dataset.hpp"
#include "semibias/estimators.hpp"
#include "semibias/rng.hpp"

namespace semibias {

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two-component normal mixture; defaults follow the simulation design used
// for the average-density and integrated-squared-density experiments.
struct MixedNormalParams {
  double alpha = 0.4;
  double mu1 = -2.0;
  double sigma1_sq = 0.5;
  double mu2 = 1.0;
  double sigma2_sq = 1.0;
};

Dataset sample_mixed_normal(const MixedNormalParams& params, std::size_t n,
                            RngStream& rng);

double mixed_normal_density(const MixedNormalParams& params, double x);

// theta_0 = E[gamma_0(Z)] = int gamma_0^2, by high-precision trapezoid
// quadrature over +/- 10 standard deviations around the component means.
// Ground truth for bias and coverage.
double true_theta_ad(const MixedNormalParams& params);

// The same quantity from the two-component product formula
//   alpha^2/sqrt(4 pi s1) + (1-alpha)^2/sqrt(4 pi s2)
//   + 2 alpha(1-alpha)/sqrt(2 pi (s1+s2)) exp(-(mu1-mu2)^2/(2(s1+s2))).
// Kept alongside the quadrature as a cross-check.
double mixed_normal_theta_closed_form(const MixedNormalParams& params);

// Linear model y = x' beta + eps with x ~ N(0, I_d), eps ~ N(0,1).
Dataset sample_linear_model(int dim, std::span<const double> beta,
                            std::size_t n, RngStream& rng);

// theta_0 for the density-weighted average derivative under the linear
// model: beta_c * (4 pi)^{-d/2}.
double true_theta_dwad(int dim, std::span<const double> beta, int component);

// Monte Carlo estimate of -2 E[ d_c gamma_0(X) * Y ] used to cross-check the
// closed form; returns the sample mean over `draws` simulated observations.
double dwad_theta_mc_oracle(int dim, std::span<const double> beta,
                            int component, std::size_t draws,
                            std::uint64_t seed);

struct MseDecomposition {
  double bias = 0.0;
  double variance = 0.0;  // population form (divisor R), so mse = bias^2 + variance exactly
  double mse = 0.0;
};

MseDecomposition mse_decomposition(std::span<const double> estimates,
                                   double theta0);

double coverage_rate(std::span<const std::pair<double, double>> intervals,
                     double theta0);

// ---------------------------------------------------------------------------
// Experiment configuration and the replication engine.

enum class MethodId { Raw, Abc, Msj };
enum class DgpKind { MixedNormal, LinearModel };

std::string method_name(MethodId m);
std::string estimator_name(EstimatorKind k);

struct ExperimentConfig {
  EstimatorKind estimator = EstimatorKind::AverageDensity;
  DgpKind dgp = DgpKind::MixedNormal;
  MixedNormalParams mixture;
  int dim = 1;                       // linear-model dimension
  std::vector<double> beta;          // linear-model coefficients (size dim)
  int component = 0;                 // DWAD gradient component
  std::size_t n = 0;
  int replications = 0;
  std::vector<double> bandwidths;    // strictly increasing
  std::vector<MethodId> methods;
  std::vector<double> msj_etas;
  std::vector<double> msj_exponents;
  double ci_level = 0.95;
  std::optional<int> bootstrap_p;
  std::uint64_t master_seed = 0;
  double grid_pad = 4.0;             // density-integral grid: [min-pad, max+pad]
  int grid_points = 500;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Default bandwidth grids: 20 log-spaced points in [0.05, 0.5] for the
// density functionals, 20 linearly spaced points in [0.2, 1.2] for the
// average-derivative experiments.
std::vector<double> default_bandwidth_grid(EstimatorKind kind);

// Default jackknife scales: (1, 5/4) two-scale for AD and DWAD,
// (3/5, 4/5, 1, 6/5, 7/5) five-scale for ISD.
std::vector<double> default_msj_etas(EstimatorKind kind);

// Exponent rows derived from the scale count: Q=2 -> (m), Q=3 -> (m, -d),
// Q=5 -> (m, m+2, m+4, -d) with m the kernel order and d the smoothing
// dimension.
std::vector<double> derive_msj_exponents(std::size_t q, int m, int d);

struct ReportCell {
  MethodId method = MethodId::Raw;
  double h = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double coverage = 0.0;
  std::vector<double> tstats;     // one per replication, in replication order
  double mean_b_nl = 0.0;         // averaged plug-in bias terms (ABC cells)
  double mean_b_anb = 0.0;
};

struct MonteCarloReport {
  ExperimentConfig config;        // fully resolved
  double theta0 = 0.0;
  double theta0_closed_form = 0.0;  // NaN when not applicable
  std::vector<ReportCell> cells;    // sorted by (method name, h)
};

// Runs the experiment: replication r draws its data from stream
// (master_seed, r); every (method, bandwidth) cell gets a point estimate,
// variance, confidence interval, and t-statistic; aggregation is an ordered
// reduce over replications, so the report is identical for any thread count.
// Estimator failures abort with the failing (replication, method, h) cell
// named in the error.
MonteCarloReport run_experiment(const ExperimentConfig& config,
                                int threads = 0);

}  // namespace semibias
