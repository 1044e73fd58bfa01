#include "semibias/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "semibias/bias_correction.hpp"
#include "semibias/inference.hpp"
#include "semibias/normal.hpp"
#include "semibias/parallel.hpp"
#include "semibias/smoothing.hpp"
#include "semibias/summation.hpp"

namespace semibias {

namespace {
constexpr double kFourPi = 12.566370614359172;
}

Dataset sample_mixed_normal(const MixedNormalParams& params, std::size_t n,
                            RngStream& rng) {
  if (n < 2) throw std::invalid_argument("sample_mixed_normal: n >= 2 required");
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
    throw std::invalid_argument("sample_mixed_normal: alpha must lie in (0,1)");
  }
  const double sd1 = std::sqrt(params.sigma1_sq);
  const double sd2 = std::sqrt(params.sigma2_sq);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    const double z = rng.next_normal();
    xs[i] = (u < params.alpha) ? params.mu1 + sd1 * z : params.mu2 + sd2 * z;
  }
  return Dataset::univariate(std::move(xs));
}

double mixed_normal_density(const MixedNormalParams& params, double x) {
  return params.alpha * normal_pdf(x, params.mu1, params.sigma1_sq) +
         (1.0 - params.alpha) * normal_pdf(x, params.mu2, params.sigma2_sq);
}

double true_theta_ad(const MixedNormalParams& params) {
  const double sd = std::sqrt(std::max(params.sigma1_sq, params.sigma2_sq));
  const GridSpec grid{std::min(params.mu1, params.mu2) - 10.0 * sd,
                      std::max(params.mu1, params.mu2) + 10.0 * sd, 100001};
  return grid_integrate(
      [&](double x) {
        const double g = mixed_normal_density(params, x);
        return g * g;
      },
      grid);
}

double mixed_normal_theta_closed_form(const MixedNormalParams& params) {
  const double a = params.alpha;
  const double s1 = params.sigma1_sq;
  const double s2 = params.sigma2_sq;
  const double dmu = params.mu1 - params.mu2;
  return a * a / std::sqrt(4.0 * s1 * M_PI) +
         (1.0 - a) * (1.0 - a) / std::sqrt(4.0 * s2 * M_PI) +
         2.0 * a * (1.0 - a) / std::sqrt(2.0 * M_PI * (s1 + s2)) *
             std::exp(-0.5 * dmu * dmu / (s1 + s2));
}

Dataset sample_linear_model(int dim, std::span<const double> beta,
                            std::size_t n, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("sample_linear_model: dim >= 1 required");
  if (static_cast<int>(beta.size()) != dim) {
    throw std::invalid_argument("sample_linear_model: beta length must equal dim");
  }
  if (n < 2) throw std::invalid_argument("sample_linear_model: n >= 2 required");
  std::vector<double> xs(n * dim);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double x = rng.next_normal();
      xs[i * dim + c] = x;
      mean += x * beta[c];
    }
    ys[i] = mean + rng.next_normal();
  }
  return Dataset(std::move(xs), dim, std::move(ys));
}

double true_theta_dwad(int dim, std::span<const double> beta, int component) {
  if (component < 0 || component >= dim) {
    throw std::invalid_argument("true_theta_dwad: component index out of range");
  }
  if (static_cast<int>(beta.size()) != dim) {
    throw std::invalid_argument("true_theta_dwad: beta length must equal dim");
  }
  return beta[component] * std::pow(kFourPi, -0.5 * dim);
}

double dwad_theta_mc_oracle(int dim, std::span<const double> beta,
                            int component, std::size_t draws,
                            std::uint64_t seed) {
  RngStream rng(seed, {0x0aceull});
  const double norm = std::pow(2.0 * M_PI, -0.5 * dim);
  PairwiseAccumulator acc;
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < draws; ++i) {
    double r2 = 0.0;
    double mean = 0.0;
    for (int c = 0; c < dim; ++c) {
      x[c] = rng.next_normal();
      r2 += x[c] * x[c];
      mean += x[c] * beta[c];
    }
    const double y = mean + rng.next_normal();
    const double gamma = norm * std::exp(-0.5 * r2);
    // -2 * d_c gamma_0(x) * y with d_c gamma_0 = -x_c gamma_0.
    acc.add(2.0 * x[component] * gamma * y);
  }
  return acc.total() / static_cast<double>(draws);
}

MseDecomposition mse_decomposition(std::span<const double> estimates,
                                   double theta0) {
  if (estimates.empty()) throw std::invalid_argument("mse_decomposition: empty estimate list");
  MseDecomposition d;
  d.bias = sample_mean(estimates) - theta0;
  d.variance = sample_variance(estimates, 0);
  d.mse = d.bias * d.bias + d.variance;
  return d;
}

double coverage_rate(std::span<const std::pair<double, double>> intervals,
                     double theta0) {
  if (intervals.empty()) throw std::invalid_argument("coverage_rate: empty interval list");
  std::size_t hits = 0;
  for (const auto& [lo, hi] : intervals) {
    if (lo <= theta0 && theta0 <= hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

// ---------------------------------------------------------------------------

std::string method_name(MethodId m) {
  switch (m) {
    case MethodId::Raw: return "raw";
    case MethodId::Abc: return "abc";
    case MethodId::Msj: return "msj";
  }
  return "?";
}

std::string estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::AverageDensity: return "ad";
    case EstimatorKind::IntegratedSquaredDensity: return "isd";
    case EstimatorKind::DensityWeightedAvgDerivative: return "dwad";
  }
  return "?";
}

std::vector<double> default_bandwidth_grid(EstimatorKind kind) {
  std::vector<double> grid(20);
  if (kind == EstimatorKind::DensityWeightedAvgDerivative) {
    for (int i = 0; i < 20; ++i) grid[i] = 0.2 + i * (1.2 - 0.2) / 19.0;
  } else {
    const double lo = std::log(0.05), hi = std::log(0.5);
    for (int i = 0; i < 20; ++i) grid[i] = std::exp(lo + i * (hi - lo) / 19.0);
  }
  return grid;
}

std::vector<double> default_msj_etas(EstimatorKind kind) {
  if (kind == EstimatorKind::IntegratedSquaredDensity) {
    return {0.6, 0.8, 1.0, 1.2, 1.4};
  }
  return {1.0, 1.25};
}

std::vector<double> derive_msj_exponents(std::size_t q, int m, int d) {
  switch (q) {
    case 1: return {};
    case 2: return default_scheme_exponents(MsjPreset::TwoScaleSmoothing, m, d);
    case 3: return default_scheme_exponents(MsjPreset::ThreeScale, m, d);
    case 5: return default_scheme_exponents(MsjPreset::FiveScaleEven, m, d);
    default:
      throw std::invalid_argument(
          "no default exponent rule for " + std::to_string(q) +
          " scales; specify exponents explicitly");
  }
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  if (bandwidths.empty()) throw std::invalid_argument("config: bandwidth grid is empty");
  for (std::size_t i = 0; i < bandwidths.size(); ++i) {
    if (!(bandwidths[i] > 0.0)) throw std::invalid_argument("config: bandwidths must be positive");
    if (i > 0 && !(bandwidths[i] > bandwidths[i - 1])) {
      throw std::invalid_argument("config: bandwidth grid must be strictly increasing");
    }
  }
  if (methods.empty()) throw std::invalid_argument("config: methods list is empty");
  for (std::size_t a = 0; a < methods.size(); ++a) {
    for (std::size_t b = a + 1; b < methods.size(); ++b) {
      if (methods[a] == methods[b]) throw std::invalid_argument("config: duplicate method");
    }
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument("config: ci_level must lie in (0,1)");
  }
  if (bootstrap_p && *bootstrap_p < 2) {
    throw std::invalid_argument("config: bootstrap_p must be >= 2");
  }
  const bool is_dwad = estimator == EstimatorKind::DensityWeightedAvgDerivative;
  if (is_dwad) {
    if (dgp != DgpKind::LinearModel) {
      throw std::invalid_argument("config: dwad requires the linear-model dgp");
    }
    if (dim < 1 || static_cast<int>(beta.size()) != dim) {
      throw std::invalid_argument("config: beta length must equal dim");
    }
    if (component < 0 || component >= dim) {
      throw std::invalid_argument("config: component must index a coordinate");
    }
  } else {
    if (dgp != DgpKind::MixedNormal) {
      throw std::invalid_argument("config: ad/isd require the mixed-normal dgp");
    }
    if (!(mixture.alpha > 0.0 && mixture.alpha < 1.0)) {
      throw std::invalid_argument("config: mixture alpha must lie in (0,1)");
    }
    if (!(mixture.sigma1_sq > 0.0 && mixture.sigma2_sq > 0.0)) {
      throw std::invalid_argument("config: mixture variances must be positive");
    }
  }
  if (std::find(methods.begin(), methods.end(), MethodId::Msj) != methods.end()) {
    // Solving validates distinctness/conditioning at configuration time.
    solve_msj_weights(msj_etas, msj_exponents);
  }
  if (grid_points < 2) throw std::invalid_argument("config: grid_points must be >= 2");
  if (!(grid_pad > 0.0)) throw std::invalid_argument("config: grid_pad must be positive");
}

namespace {

struct CellOutcome {
  double theta = 0.0;
  double sigma = 0.0;
  double t = 0.0;
  bool covered = false;
  double b_nl = 0.0;
  double b_anb = 0.0;
};

struct EngineContext {
  const ExperimentConfig& cfg;
  Kernel base;
  Kernel convolved;
  Kernel twice;
  Kernel msj_combined;  // sum_q w_q K(./eta_q)/eta_q^d; only valid with msj
  std::vector<double> msj_weights;
  double theta0 = 0.0;

  explicit EngineContext(const ExperimentConfig& config)
      : cfg(config),
        base(Kernel::gaussian(
            config.estimator == EstimatorKind::DensityWeightedAvgDerivative
                ? config.dim
                : 1)),
        convolved(base.self_convolution()),
        twice(base.twicing()),
        msj_combined(base) {
    if (std::find(config.methods.begin(), config.methods.end(),
                  MethodId::Msj) != config.methods.end()) {
      msj_weights = solve_msj_weights(config.msj_etas, config.msj_exponents);
      // The scale combination of a linear-in-kernel estimator is the same
      // estimator under the combined kernel: sum_q w_q K_{eta_q h} = C_h
      // with C = sum_q w_q K(./eta_q)/eta_q^d. One pairwise pass instead
      // of Q.
      std::vector<Kernel> scaled;
      scaled.reserve(config.msj_etas.size());
      for (double eta : config.msj_etas) scaled.push_back(base.scale_bandwidth(eta));
      msj_combined = Kernel::linear_combination(msj_weights, scaled);
    }
  }
};

std::vector<double> kde_on_grid(const Dataset& data, const Kernel& kernel,
                                double h, const GridSpec& grid) {
  std::vector<double> out(grid.points);
  const double step = (grid.upper - grid.lower) / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i) {
    const double x = grid.lower + i * step;
    out[i] = kde(data, kernel, h, {&x, 1});
  }
  return out;
}

[[noreturn]] void rethrow_with_cell(const std::exception& e, MethodId method,
                                    double h) {
  std::ostringstream os;
  os << "method " << method_name(method) << ", h=" << h << ": " << e.what();
  throw EstimationError(os.str());
}

void finish_cell(const EngineContext& ctx, const Dataset& data,
                 CellOutcome& cell) {
  const auto [lo, hi] =
      confidence_interval(cell.theta, cell.sigma, data.size(), ctx.cfg.ci_level);
  cell.covered = (lo <= ctx.theta0 && ctx.theta0 <= hi);
  if (cell.sigma > 0.0) {
    cell.t = t_statistic(cell.theta, ctx.theta0, cell.sigma, data.size());
  } else {
    throw EstimationError("degenerate variance estimate");
  }
}

// Replaces the plug-in variance with a bootstrap when configured.
void maybe_bootstrap(const EngineContext& ctx, const Dataset& data,
                     const RngStream& rep_stream,
                     const std::function<double(const Dataset&)>& estimator,
                     CellOutcome& cell) {
  if (!ctx.cfg.bootstrap_p) return;
  cell.sigma =
      bootstrap_variance(estimator, data, *ctx.cfg.bootstrap_p, rep_stream, 1)
          .sigma_hat;
}

void run_ad_replication(const EngineContext& ctx, const Dataset& data,
                        const RngStream& rep_stream,
                        std::span<CellOutcome> out) {
  const auto& cfg = ctx.cfg;
  const std::size_t H = cfg.bandwidths.size();
  for (std::size_t j = 0; j < H; ++j) {
    const double h = cfg.bandwidths[j];
    std::vector<double> raw_values;  // computed lazily, shared by raw/abc
    auto raw_vals = [&]() -> const std::vector<double>& {
      if (raw_values.empty()) raw_values = loo_kde_values(data, ctx.base, h);
      return raw_values;
    };
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      CellOutcome& cell = out[m * H + j];
      try {
      switch (cfg.methods[m]) {
        case MethodId::Raw: {
          const auto& vals = raw_vals();
          cell.theta = sample_mean(vals);
          cell.sigma = plug_in_variance(vals);
          maybe_bootstrap(ctx, data, rep_stream,
                          [&](const Dataset& d) { return ad_estimate(d, ctx.base, h); },
                          cell);
          break;
        }
        case MethodId::Abc: {
          const std::vector<double> vals = loo_kde_values(data, ctx.twice, h);
          cell.theta = sample_mean(vals);
          cell.sigma = plug_in_variance(vals);
          cell.b_anb = sample_mean(raw_vals()) - cell.theta;
          maybe_bootstrap(ctx, data, rep_stream,
                          [&](const Dataset& d) { return abc_ad(d, ctx.base, h).corrected; },
                          cell);
          break;
        }
        case MethodId::Msj: {
          const std::vector<double> combined =
              loo_kde_values(data, ctx.msj_combined, h);
          cell.theta = sample_mean(combined);
          cell.sigma = plug_in_variance(combined);
          maybe_bootstrap(ctx, data, rep_stream,
                          [&](const Dataset& d) {
                            return ad_estimate(d, ctx.msj_combined, h);
                          },
                          cell);
          break;
        }
      }
      finish_cell(ctx, data, cell);
      } catch (const std::exception& e) {
        rethrow_with_cell(e, cfg.methods[m], h);
      }
    }
  }
}

void run_isd_replication(const EngineContext& ctx, const Dataset& data,
                         const RngStream& rep_stream,
                         std::span<CellOutcome> out) {
  const auto& cfg = ctx.cfg;
  const std::size_t H = cfg.bandwidths.size();
  const GridSpec grid =
      default_integration_grid(data, cfg.grid_pad, cfg.grid_points);
  const double step = (grid.upper - grid.lower) / (grid.points - 1);

  for (std::size_t j = 0; j < H; ++j) {
    const double h = cfg.bandwidths[j];
    std::vector<double> g_hat;  // base-kernel KDE on the grid, lazily shared
    auto grid_vals = [&]() -> const std::vector<double>& {
      if (g_hat.empty()) g_hat = kde_on_grid(data, ctx.base, h, grid);
      return g_hat;
    };
    auto isd_of = [&](std::span<const double> g) {
      PairwiseAccumulator acc;
      acc.add(0.5 * g.front() * g.front());
      for (std::size_t i = 1; i + 1 < g.size(); ++i) acc.add(g[i] * g[i]);
      acc.add(0.5 * g.back() * g.back());
      return acc.total() * step;
    };
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      CellOutcome& cell = out[m * H + j];
      try {
      switch (cfg.methods[m]) {
        case MethodId::Raw: {
          cell.theta = isd_of(grid_vals());
          cell.sigma =
              plug_in_variance(kde_values_at_points(data, ctx.base, h));
          maybe_bootstrap(
              ctx, data, rep_stream,
              [&](const Dataset& d) {
                return isd_estimate(d, ctx.base, h,
                                    default_integration_grid(d, cfg.grid_pad,
                                                             cfg.grid_points));
              },
              cell);
          break;
        }
        case MethodId::Abc: {
          const auto& g = grid_vals();
          const std::vector<double> g_bar =
              kde_on_grid(data, ctx.convolved, h, grid);
          cell.b_nl = ctx.base.l2_norm_sq() /
                      (static_cast<double>(data.size()) * h);
          PairwiseAccumulator acc;
          for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
            acc.add(w * 2.0 * g[i] * (g_bar[i] - g[i]));
          }
          cell.b_anb = acc.total() * step;
          cell.theta = isd_of(g) - cell.b_nl - cell.b_anb;
          cell.sigma =
              plug_in_variance(kde_values_at_points(data, ctx.twice, h));
          maybe_bootstrap(
              ctx, data, rep_stream,
              [&](const Dataset& d) {
                return abc_isd(d, ctx.base, h,
                               default_integration_grid(d, cfg.grid_pad,
                                                        cfg.grid_points))
                    .corrected;
              },
              cell);
          break;
        }
        case MethodId::Msj: {
          // The combination is of the quadratic functionals, not of the
          // densities, so the point estimate needs one grid pass per scale;
          // only the plug-in variance values combine into a single kernel.
          double theta = 0.0;
          for (std::size_t q = 0; q < cfg.msj_etas.size(); ++q) {
            const double hq = cfg.msj_etas[q] * h;
            const std::vector<double> g =
                (hq == h) ? grid_vals() : kde_on_grid(data, ctx.base, hq, grid);
            theta += ctx.msj_weights[q] * isd_of(g);
          }
          cell.theta = theta;
          cell.sigma = plug_in_variance(
              kde_values_at_points(data, ctx.msj_combined, h));
          maybe_bootstrap(
              ctx, data, rep_stream,
              [&](const Dataset& d) {
                const GridSpec g =
                    default_integration_grid(d, cfg.grid_pad, cfg.grid_points);
                double v = 0.0;
                for (std::size_t q = 0; q < cfg.msj_etas.size(); ++q) {
                  v += ctx.msj_weights[q] *
                       isd_estimate(d, ctx.base, cfg.msj_etas[q] * h, g);
                }
                return v;
              },
              cell);
          break;
        }
      }
      finish_cell(ctx, data, cell);
      } catch (const std::exception& e) {
        rethrow_with_cell(e, cfg.methods[m], h);
      }
    }
  }
}

void run_dwad_replication(const EngineContext& ctx, const Dataset& data,
                          const RngStream& rep_stream,
                          std::span<CellOutcome> out) {
  const auto& cfg = ctx.cfg;
  const std::size_t H = cfg.bandwidths.size();
  const std::size_t n = data.size();
  for (std::size_t j = 0; j < H; ++j) {
    const double h = cfg.bandwidths[j];
    std::vector<double> pairs_raw;
    auto raw_pairs = [&]() -> const std::vector<double>& {
      if (pairs_raw.empty()) {
        pairs_raw = dwad_pair_values(data, ctx.base, h, cfg.component);
      }
      return pairs_raw;
    };
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      CellOutcome& cell = out[m * H + j];
      try {
      switch (cfg.methods[m]) {
        case MethodId::Raw: {
          const UStatVariance u = ustat_variance_from_pairs(raw_pairs(), n);
          cell.theta = u.theta;
          cell.sigma = u.sigma();
          maybe_bootstrap(
              ctx, data, rep_stream,
              [&](const Dataset& d) { return dwad_estimate(d, ctx.base, h, cfg.component); },
              cell);
          break;
        }
        case MethodId::Abc: {
          const std::vector<double> pairs_twice =
              dwad_pair_values(data, ctx.twice, h, cfg.component);
          const UStatVariance u = ustat_variance_from_pairs(pairs_twice, n);
          cell.theta = u.theta;
          cell.sigma = u.sigma();
          const UStatVariance u_raw = ustat_variance_from_pairs(raw_pairs(), n);
          cell.b_nl = u_raw.theta - u.theta;
          maybe_bootstrap(
              ctx, data, rep_stream,
              [&](const Dataset& d) {
                return abc_dwad(d, ctx.base, h, cfg.component).corrected;
              },
              cell);
          break;
        }
        case MethodId::Msj: {
          const std::vector<double> combined =
              dwad_pair_values(data, ctx.msj_combined, h, cfg.component);
          const UStatVariance u = ustat_variance_from_pairs(combined, n);
          cell.theta = u.theta;
          cell.sigma = u.sigma();
          maybe_bootstrap(ctx, data, rep_stream,
                          [&](const Dataset& d) {
                            return dwad_estimate(d, ctx.msj_combined, h,
                                                 cfg.component);
                          },
                          cell);
          break;
        }
      }
      finish_cell(ctx, data, cell);
      } catch (const std::exception& e) {
        rethrow_with_cell(e, cfg.methods[m], h);
      }
    }
  }
}

}  // namespace

MonteCarloReport run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::size_t H = config.bandwidths.size();
  const std::size_t M = config.methods.size();
  const std::size_t cells_per_rep = M * H;
  const std::size_t R = static_cast<std::size_t>(config.replications);

  EngineContext ctx(config);

  double theta0_cf = std::numeric_limits<double>::quiet_NaN();
  if (config.estimator == EstimatorKind::DensityWeightedAvgDerivative) {
    ctx.theta0 = true_theta_dwad(config.dim, config.beta, config.component);
  } else {
    ctx.theta0 = true_theta_ad(config.mixture);
    theta0_cf = mixed_normal_theta_closed_form(config.mixture);
  }

  std::vector<CellOutcome> results(R * cells_per_rep);
  parallel_for(R, resolve_threads(threads), [&](std::size_t r) {
    RngStream rep_stream(config.master_seed, {r});
    Dataset data;
    if (config.dgp == DgpKind::MixedNormal) {
      data = sample_mixed_normal(config.mixture, config.n, rep_stream);
    } else {
      data = sample_linear_model(config.dim, config.beta, config.n, rep_stream);
    }
    std::span<CellOutcome> slots{results.data() + r * cells_per_rep,
                                 cells_per_rep};
    try {
      switch (config.estimator) {
        case EstimatorKind::AverageDensity:
          run_ad_replication(ctx, data, rep_stream, slots);
          break;
        case EstimatorKind::IntegratedSquaredDensity:
          run_isd_replication(ctx, data, rep_stream, slots);
          break;
        case EstimatorKind::DensityWeightedAvgDerivative:
          run_dwad_replication(ctx, data, rep_stream, slots);
          break;
      }
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "estimation failed at replication " << r << " ("
         << estimator_name(config.estimator) << "): " << e.what();
      throw EstimationError(os.str());
    }
  });

  MonteCarloReport report;
  report.config = config;
  report.theta0 = ctx.theta0;
  report.theta0_closed_form = theta0_cf;
  report.cells.resize(cells_per_rep);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t j = 0; j < H; ++j) {
      ReportCell& cell = report.cells[m * H + j];
      cell.method = config.methods[m];
      cell.h = config.bandwidths[j];
      std::vector<double> thetas(R);
      cell.tstats.resize(R);
      std::size_t hits = 0;
      PairwiseAccumulator b_nl, b_anb;
      for (std::size_t r = 0; r < R; ++r) {
        const CellOutcome& c = results[r * cells_per_rep + m * H + j];
        thetas[r] = c.theta;
        cell.tstats[r] = c.t;
        hits += c.covered ? 1 : 0;
        b_nl.add(c.b_nl);
        b_anb.add(c.b_anb);
      }
      const MseDecomposition mse = mse_decomposition(thetas, ctx.theta0);
      cell.bias = mse.bias;
      cell.variance = mse.variance;
      cell.mse = mse.mse;
      cell.coverage = static_cast<double>(hits) / static_cast<double>(R);
      cell.mean_b_nl = b_nl.total() / static_cast<double>(R);
      cell.mean_b_anb = b_anb.total() / static_cast<double>(R);
    }
  }

  // Stable report order: (method name, h).
  std::sort(report.cells.begin(), report.cells.end(),
            [](const ReportCell& a, const ReportCell& b) {
              const std::string ma = method_name(a.method);
              const std::string mb = method_name(b.method);
              return ma != mb ? ma < mb : a.h < b.h;
            });
  return report;
}

}  // namespace semibias
