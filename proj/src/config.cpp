#include "semibias/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace semibias {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: field '" + key + "' is not a number: '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: field '" + key + "' is not an integer: '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: field '" + key + "' is not an unsigned integer: '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("config: field '" + key + "' is an empty list");
  return out;
}

struct RawConfig {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> entries;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = entries.find(sec);
    return s != entries.end() && s->second.count(key) > 0;
  }
  std::string take(const std::string& sec, const std::string& key) {
    auto& v = entries[sec];
    auto it = v.find(key);
    const std::string value = it->second.first;
    v.erase(it);
    return value;
  }
};

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  static const std::map<std::string, std::vector<std::string>> kKnown = {
      {"experiment",
       {"estimator", "n", "replications", "master_seed", "methods", "bandwidths",
        "ci_level", "bootstrap_p", "component"}},
      {"dgp", {"kind", "alpha", "mu1", "sigma1_sq", "mu2", "sigma2_sq", "dim", "beta"}},
      {"msj", {"etas", "exponents"}},
      {"integration", {"pad", "points"}},
  };

  RawConfig raw;
  std::string line;
  std::string section = "experiment";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (kKnown.find(section) == kKnown.end()) {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& allowed = kKnown.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    }
    if (raw.entries[section].count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    raw.entries[section][key] = {value, lineno};
  }

  // Required fields first, reported together.
  std::vector<std::string> missing;
  for (const char* req : {"estimator", "n", "replications", "master_seed"}) {
    if (!raw.has("experiment", req)) missing.push_back(req);
  }
  if (!missing.empty()) {
    std::string msg = "config: missing required field(s):";
    for (const auto& f : missing) msg += " " + f;
    throw ConfigError(msg);
  }

  ExperimentConfig cfg;
  const std::string est = raw.take("experiment", "estimator");
  if (est == "ad") cfg.estimator = EstimatorKind::AverageDensity;
  else if (est == "isd") cfg.estimator = EstimatorKind::IntegratedSquaredDensity;
  else if (est == "dwad") cfg.estimator = EstimatorKind::DensityWeightedAvgDerivative;
  else throw ConfigError("config: estimator must be one of ad|isd|dwad, got '" + est + "'");

  const bool is_dwad = cfg.estimator == EstimatorKind::DensityWeightedAvgDerivative;
  cfg.dgp = is_dwad ? DgpKind::LinearModel : DgpKind::MixedNormal;

  cfg.n = static_cast<std::size_t>(parse_int("n", raw.take("experiment", "n")));
  cfg.replications = static_cast<int>(parse_int("replications", raw.take("experiment", "replications")));
  cfg.master_seed = parse_u64("master_seed", raw.take("experiment", "master_seed"));

  if (raw.has("experiment", "methods")) {
    cfg.methods.clear();
    for (const std::string& m : split_list(raw.take("experiment", "methods"))) {
      if (m == "raw") cfg.methods.push_back(MethodId::Raw);
      else if (m == "abc") cfg.methods.push_back(MethodId::Abc);
      else if (m == "msj") cfg.methods.push_back(MethodId::Msj);
      else throw ConfigError("config: unknown method '" + m + "'");
    }
  } else {
    cfg.methods = {MethodId::Raw, MethodId::Abc, MethodId::Msj};
  }

  cfg.bandwidths = raw.has("experiment", "bandwidths")
                       ? parse_double_list("bandwidths", raw.take("experiment", "bandwidths"))
                       : default_bandwidth_grid(cfg.estimator);
  if (raw.has("experiment", "ci_level")) {
    cfg.ci_level = parse_double("ci_level", raw.take("experiment", "ci_level"));
  }
  if (raw.has("experiment", "bootstrap_p")) {
    cfg.bootstrap_p = static_cast<int>(parse_int("bootstrap_p", raw.take("experiment", "bootstrap_p")));
  }
  if (raw.has("experiment", "component")) {
    cfg.component = static_cast<int>(parse_int("component", raw.take("experiment", "component")));
  }

  if (raw.has("dgp", "kind")) {
    const std::string kind = raw.take("dgp", "kind");
    if (kind == "mixed_normal") cfg.dgp = DgpKind::MixedNormal;
    else if (kind == "linear_model") cfg.dgp = DgpKind::LinearModel;
    else throw ConfigError("config: dgp kind must be mixed_normal|linear_model");
  }
  if (raw.has("dgp", "alpha")) cfg.mixture.alpha = parse_double("alpha", raw.take("dgp", "alpha"));
  if (raw.has("dgp", "mu1")) cfg.mixture.mu1 = parse_double("mu1", raw.take("dgp", "mu1"));
  if (raw.has("dgp", "sigma1_sq")) cfg.mixture.sigma1_sq = parse_double("sigma1_sq", raw.take("dgp", "sigma1_sq"));
  if (raw.has("dgp", "mu2")) cfg.mixture.mu2 = parse_double("mu2", raw.take("dgp", "mu2"));
  if (raw.has("dgp", "sigma2_sq")) cfg.mixture.sigma2_sq = parse_double("sigma2_sq", raw.take("dgp", "sigma2_sq"));
  cfg.dim = is_dwad ? 3 : 1;
  if (raw.has("dgp", "dim")) cfg.dim = static_cast<int>(parse_int("dim", raw.take("dgp", "dim")));
  if (raw.has("dgp", "beta")) {
    cfg.beta = parse_double_list("beta", raw.take("dgp", "beta"));
  } else if (is_dwad) {
    cfg.beta.assign(static_cast<std::size_t>(std::max(cfg.dim, 1)), 1.0);
  }

  cfg.msj_etas = raw.has("msj", "etas")
                     ? parse_double_list("etas", raw.take("msj", "etas"))
                     : default_msj_etas(cfg.estimator);
  const int smoothing_dim = is_dwad ? cfg.dim : 1;
  if (raw.has("msj", "exponents")) {
    cfg.msj_exponents = parse_double_list("exponents", raw.take("msj", "exponents"));
  } else {
    try {
      cfg.msj_exponents = derive_msj_exponents(cfg.msj_etas.size(), 2, smoothing_dim);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }

  if (raw.has("integration", "pad")) cfg.grid_pad = parse_double("pad", raw.take("integration", "pad"));
  if (raw.has("integration", "points")) {
    cfg.grid_points = static_cast<int>(parse_int("points", raw.take("integration", "points")));
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  auto join = [&](std::span<const double> v) {
    std::ostringstream js;
    js.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) js << ", ";
      js << v[i];
    }
    return js.str();
  };
  os << "[experiment]\n";
  os << "estimator = " << estimator_name(cfg.estimator) << "\n";
  os << "n = " << cfg.n << "\n";
  os << "replications = " << cfg.replications << "\n";
  os << "master_seed = " << cfg.master_seed << "\n";
  os << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    if (i) os << ", ";
    os << method_name(cfg.methods[i]);
  }
  os << "\n";
  os << "bandwidths = " << join(cfg.bandwidths) << "\n";
  os << "ci_level = " << cfg.ci_level << "\n";
  if (cfg.bootstrap_p) os << "bootstrap_p = " << *cfg.bootstrap_p << "\n";
  if (cfg.estimator == EstimatorKind::DensityWeightedAvgDerivative) {
    os << "component = " << cfg.component << "\n";
  }
  os << "\n[dgp]\n";
  if (cfg.dgp == DgpKind::MixedNormal) {
    os << "kind = mixed_normal\n";
    os << "alpha = " << cfg.mixture.alpha << "\n";
    os << "mu1 = " << cfg.mixture.mu1 << "\n";
    os << "sigma1_sq = " << cfg.mixture.sigma1_sq << "\n";
    os << "mu2 = " << cfg.mixture.mu2 << "\n";
    os << "sigma2_sq = " << cfg.mixture.sigma2_sq << "\n";
  } else {
    os << "kind = linear_model\n";
    os << "dim = " << cfg.dim << "\n";
    os << "beta = " << join(cfg.beta) << "\n";
  }
  os << "\n[msj]\n";
  os << "etas = " << join(cfg.msj_etas) << "\n";
  os << "exponents = " << join(cfg.msj_exponents) << "\n";
  os << "\n[integration]\n";
  os << "pad = " << cfg.grid_pad << "\n";
  os << "points = " << cfg.grid_points << "\n";
  return os.str();
}

}  // namespace semibias
