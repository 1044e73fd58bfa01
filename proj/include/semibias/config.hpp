#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "semibias/montecarlo.hpp"

namespace semibias {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment configs are flat `key = value` text files with [section]
// headers and `#` comments:
//
//   [experiment]
//   estimator   = ad            # ad | isd | dwad
//   n           = 100
//   replications = 1000
//   master_seed = 20240809
//   methods     = raw, abc, msj
//   bandwidths  = 0.05, 0.1, 0.2     # omit for the default grid
//   ci_level    = 0.95
//   bootstrap_p = 500                 # optional
//   component   = 0                   # dwad only
//
//   [dgp]
//   alpha = 0.4        mu1 = -2.0  sigma1_sq = 0.5   (one key per line)
//   mu2 = 1.0          sigma2_sq = 1.0
//   dim = 3            beta = 1, 1, 1                (linear model)
//
//   [msj]
//   etas      = 1, 1.25
//   exponents = 2      # omitted -> derived from the scale count
//
//   [integration]
//   pad = 4.0
//   points = 500
//
// Parsing is strict: unknown keys or sections are errors, invariant
// violations name the offending field, and jackknife scale lists are
// validated (weights solved) at parse time. Required keys: estimator, n,
// replications, master_seed. All defaults are resolved into the returned
// config so that serialize_config() echoes a complete description.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical round-trippable rendering of a resolved config.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace semibias
