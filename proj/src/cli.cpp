#include "semibias/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "semibias/bias_correction.hpp"
#include "semibias/config.hpp"
#include "semibias/inference.hpp"
#include "semibias/montecarlo.hpp"
#include "semibias/parallel.hpp"
#include "semibias/report.hpp"
#include "semibias/summation.hpp"

namespace semibias {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace

Dataset read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("data: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("data: '" + path + "' is empty");

  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw ConfigError("data: missing header row");
  const bool has_y = header[0] == "y";
  const int dim = static_cast<int>(header.size()) - (has_y ? 1 : 0);
  if (dim < 1) throw ConfigError("data: header must list at least one x column");
  for (int c = 0; c < dim; ++c) {
    const std::string expected = "x" + std::to_string(c + 1);
    if (header[(has_y ? 1 : 0) + c] != expected) {
      throw ConfigError("data: expected column '" + expected + "' in header");
    }
  }

  std::vector<double> points;
  std::vector<double> ys;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ConfigError("data: row " + std::to_string(row) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[c], &pos);
      } catch (const std::exception&) {
        pos = std::string::npos;
      }
      if (pos != cells[c].size()) {
        throw ConfigError("data: non-numeric cell '" + cells[c] + "' at row " +
                          std::to_string(row));
      }
      if (has_y && c == 0) ys.push_back(v);
      else points.push_back(v);
    }
  }
  return Dataset(std::move(points), dim, std::move(ys));
}

namespace {

struct EstimateOptions {
  std::string data_path;
  std::string estimator;
  double h = 0.0;
  std::string method;
  std::vector<double> etas;
  int component = 0;
  double ci_level = 0.95;
  std::optional<int> bootstrap_p;
  std::uint64_t seed = 12345;
  bool full_precision = false;
};

struct EstimateRecord {
  double theta_hat = 0.0;
  double b_nl_hat = 0.0;
  double b_anb_hat = 0.0;
  double variance_hat = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

EstimateRecord run_estimate(const EstimateOptions& opt) {
  const Dataset data = read_data_csv(opt.data_path);
  if (data.size() < 2) {
    throw ConfigError("data: at least 2 observations are required, got " +
                      std::to_string(data.size()));
  }

  EstimatorKind kind;
  if (opt.estimator == "ad") kind = EstimatorKind::AverageDensity;
  else if (opt.estimator == "isd") kind = EstimatorKind::IntegratedSquaredDensity;
  else if (opt.estimator == "dwad") kind = EstimatorKind::DensityWeightedAvgDerivative;
  else throw ConfigError("estimator must be one of ad|isd|dwad");

  if (!(opt.h > 0.0)) throw ConfigError("bandwidth --h must be positive");
  if (!(opt.ci_level > 0.0 && opt.ci_level < 1.0)) {
    throw ConfigError("--ci level must lie in (0,1)");
  }
  const bool is_dwad = kind == EstimatorKind::DensityWeightedAvgDerivative;
  if (is_dwad && !data.has_responses()) {
    throw ConfigError("data: dwad requires a leading 'y' column");
  }
  if (!is_dwad && data.dim() != 1) {
    throw ConfigError("data: ad/isd require univariate observations");
  }
  if (is_dwad && (opt.component < 0 || opt.component >= data.dim())) {
    throw ConfigError("--component must index an x column");
  }

  const Kernel kernel = Kernel::gaussian(data.dim());
  const Kernel twice = kernel.twicing();
  const GridSpec grid = (kind == EstimatorKind::IntegratedSquaredDensity)
                            ? default_integration_grid(data)
                            : GridSpec{};
  const double h = opt.h;

  JackknifeScheme scheme;
  Kernel msj_combined = kernel;  // rebuilt below for msj
  if (opt.method == "msj") {
    std::vector<double> etas = opt.etas.empty() ? default_msj_etas(kind) : opt.etas;
    std::vector<double> exps;
    try {
      exps = derive_msj_exponents(etas.size(), 2, is_dwad ? data.dim() : 1);
      scheme = make_scheme(std::move(etas), std::move(exps), h);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--etas: ") + e.what());
    }
    std::vector<Kernel> scaled;
    for (double eta : scheme.etas) scaled.push_back(kernel.scale_bandwidth(eta));
    msj_combined = Kernel::linear_combination(scheme.weights, scaled);
  } else if (opt.method != "raw" && opt.method != "abc") {
    throw ConfigError("--method must be one of raw|abc|msj");
  }

  // Point estimate, bias terms, and the method-matched estimator closure
  // used for the bootstrap.
  EstimateRecord rec;
  std::function<double(const Dataset&)> closure;
  std::vector<double> influence_values;  // plug-in variance inputs (ad/isd)

  auto msj_value = [&](const Dataset& d, auto estimator_at_h) {
    double v = 0.0;
    for (std::size_t q = 0; q < scheme.etas.size(); ++q) {
      v += scheme.weights[q] * estimator_at_h(d, scheme.etas[q] * h);
    }
    return v;
  };

  switch (kind) {
    case EstimatorKind::AverageDensity: {
      if (opt.method == "raw") {
        influence_values = loo_kde_values(data, kernel, h);
        rec.theta_hat = sample_mean(influence_values);
        closure = [&kernel, h](const Dataset& d) { return ad_estimate(d, kernel, h); };
      } else if (opt.method == "abc") {
        const AbcAdResult r = abc_ad(data, kernel, h);
        rec.theta_hat = r.corrected;
        rec.b_anb_hat = r.b_anb_hat;
        influence_values = loo_kde_values(data, twice, h);
        closure = [&kernel, h](const Dataset& d) { return abc_ad(d, kernel, h).corrected; };
      } else {
        rec.theta_hat = msj_ad(data, kernel, scheme);
        influence_values = loo_kde_values(data, msj_combined, h);
        closure = [&msj_combined, h](const Dataset& d) {
          return ad_estimate(d, msj_combined, h);
        };
      }
      break;
    }
    case EstimatorKind::IntegratedSquaredDensity: {
      if (opt.method == "raw") {
        rec.theta_hat = isd_estimate(data, kernel, h, grid);
        influence_values = kde_values_at_points(data, kernel, h);
        closure = [&kernel, h](const Dataset& d) {
          return isd_estimate(d, kernel, h, default_integration_grid(d));
        };
      } else if (opt.method == "abc") {
        const AbcIsdResult r = abc_isd(data, kernel, h, grid);
        rec.theta_hat = r.corrected;
        rec.b_nl_hat = r.b_nl_hat;
        rec.b_anb_hat = r.b_anb_hat;
        influence_values = kde_values_at_points(data, twice, h);
        closure = [&kernel, h](const Dataset& d) {
          return abc_isd(d, kernel, h, default_integration_grid(d)).corrected;
        };
      } else {
        rec.theta_hat = msj_isd(data, kernel, scheme, grid);
        influence_values = kde_values_at_points(data, msj_combined, h);
        closure = [&, msj_value](const Dataset& d) {
          const GridSpec g = default_integration_grid(d);
          return msj_value(d, [&](const Dataset& dd, double hh) {
            return isd_estimate(dd, kernel, hh, g);
          });
        };
      }
      break;
    }
    case EstimatorKind::DensityWeightedAvgDerivative: {
      const int c = opt.component;
      if (opt.method == "raw") {
        const std::vector<double> pairs = dwad_pair_values(data, kernel, h, c);
        const UStatVariance u = ustat_variance_from_pairs(pairs, data.size());
        rec.theta_hat = u.theta;
        rec.variance_hat = u.sigma();
        closure = [&kernel, h, c](const Dataset& d) { return dwad_estimate(d, kernel, h, c); };
      } else if (opt.method == "abc") {
        const std::vector<double> pairs = dwad_pair_values(data, twice, h, c);
        const UStatVariance u = ustat_variance_from_pairs(pairs, data.size());
        rec.theta_hat = u.theta;
        rec.variance_hat = u.sigma();
        rec.b_nl_hat = dwad_estimate(data, kernel, h, c) - rec.theta_hat;
        closure = [&kernel, h, c](const Dataset& d) {
          return abc_dwad(d, kernel, h, c).corrected;
        };
      } else {
        const std::vector<double> pairs =
            dwad_pair_values(data, msj_combined, h, c);
        const UStatVariance u = ustat_variance_from_pairs(pairs, data.size());
        rec.theta_hat = u.theta;
        rec.variance_hat = u.sigma();
        closure = [&msj_combined, h, c](const Dataset& d) {
          return dwad_estimate(d, msj_combined, h, c);
        };
      }
      break;
    }
  }

  if (kind != EstimatorKind::DensityWeightedAvgDerivative) {
    rec.variance_hat = plug_in_variance(influence_values);
  }
  if (opt.bootstrap_p) {
    rec.variance_hat =
        bootstrap_variance(closure, data, *opt.bootstrap_p, RngStream(opt.seed))
            .sigma_hat;
  }
  const auto [lo, hi] =
      confidence_interval(rec.theta_hat, rec.variance_hat, data.size(), opt.ci_level);
  rec.ci_lower = lo;
  rec.ci_upper = hi;
  return rec;
}

void print_record(std::ostream& out, const EstimateRecord& rec, bool full) {
  const char* spec = full ? "%.17g" : "%.6g";
  char buf[64];
  auto f = [&](double v) {
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
  };
  out << "theta_hat=" << f(rec.theta_hat) << " b_nl_hat=" << f(rec.b_nl_hat)
      << " b_anb_hat=" << f(rec.b_anb_hat)
      << " variance_hat=" << f(rec.variance_hat)
      << " ci_lower=" << f(rec.ci_lower) << " ci_upper=" << f(rec.ci_upper)
      << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int threads, bool full_precision, std::ostream& out,
                 std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  MonteCarloReport report;
  try {
    report = run_experiment(cfg, threads);
  } catch (const EstimationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEstimationFailure;
  }
  try {
    write_report_files(report, out_dir, full_precision);
    std::ofstream cfg_out(std::filesystem::path(out_dir) / "config_resolved.txt",
                          std::ios::binary);
    cfg_out << serialize_config(report.config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  out << "# resolved configuration\n" << serialize_config(report.config);
  out << "# theta0 (quadrature ground truth) = " << report.theta0 << "\n";
  if (!std::isnan(report.theta0_closed_form)) {
    out << "# theta0 (closed-form cross-check) = " << report.theta0_closed_form
        << "\n";
  }
  out << "wrote " << (std::filesystem::path(out_dir) / "report.csv").string()
      << " and " << (std::filesystem::path(out_dir) / "tstats.csv").string()
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"kernel-based semiparametric estimators with bias-robust inference"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config file");
  sim->set_help_flag("--help", "print help");
  std::string config_path, out_dir;
  int threads = 0;
  bool full_precision = false;
  sim->add_option("--config", config_path, "experiment config file")->required();
  sim->add_option("--out", out_dir, "output directory for report.csv / tstats.csv")->required();
  sim->add_option("--threads", threads, "worker thread cap (default: SEMIBIAS_THREADS or hardware)");
  sim->add_flag("--full-precision", full_precision, "print decimals with full precision");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate from a data CSV");
  est->set_help_flag("--help", "print help");
  EstimateOptions opt;
  std::string etas_arg;
  est->add_option("--data", opt.data_path, "CSV with header y,x1..xd or x1..xd")->required();
  est->add_option("--estimator", opt.estimator, "ad | isd | dwad")->required();
  est->add_option("--h", opt.h, "bandwidth")->required();
  est->add_option("--method", opt.method, "raw | abc | msj")->required();
  est->add_option("--etas", etas_arg, "comma-separated jackknife scales (msj)");
  est->add_option("--component", opt.component, "gradient component (dwad)");
  est->add_option("--ci", opt.ci_level, "confidence level (default 0.95)");
  est->add_option("--bootstrap", opt.bootstrap_p, "bootstrap replicates for the variance");
  est->add_option("--seed", opt.seed, "bootstrap master seed (default 12345)");
  est->add_flag("--full-precision", opt.full_precision, "print full precision");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (sim->parsed()) {
    return cmd_simulate(config_path, out_dir, threads, full_precision, out, err);
  }

  try {
    if (!etas_arg.empty()) {
      std::istringstream is(etas_arg);
      std::string item;
      while (std::getline(is, item, ',')) {
        try {
          opt.etas.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError("--etas: '" + item + "' is not a number");
        }
      }
    }
    const EstimateRecord rec = run_estimate(opt);
    print_record(out, rec, opt.full_precision);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEstimationFailure;
  }
}

}  // namespace semibias
