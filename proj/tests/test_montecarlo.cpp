#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semibias/montecarlo.hpp"
#include "semibias/report.hpp"
#include "semibias/rng.hpp"

using namespace semibias;

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("mixed normal density") {
  const MixedNormalParams defaults{};
  CHECK(mixed_normal_density(defaults, 1.0) ==
        doctest::Approx(0.239393218851249).epsilon(1e-12));
  CHECK(mixed_normal_density(defaults, -2.0) ==
        doctest::Approx(0.2283349424662653).epsilon(1e-12));

  // alpha -> 1 collapses to the first component.
  const MixedNormalParams single{0.999999999, 0.0, 1.0, 50.0, 1.0};
  CHECK(mixed_normal_density(single, 0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-6));
}

TEST_CASE("mixed normal sampling is reproducible with correct moments") {
  const MixedNormalParams p{};
  RngStream r1(101);
  RngStream r2(101);
  const Dataset a = sample_mixed_normal(p, 1000, r1);
  const Dataset b = sample_mixed_normal(p, 1000, r2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.coord(i, 0) == b.coord(i, 0));

  RngStream big(202);
  const Dataset m = sample_mixed_normal(p, 1000000, big);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sum += m.coord(i, 0);
    sum_sq += m.coord(i, 0) * m.coord(i, 0);
  }
  const double mean = sum / m.size();
  const double var = sum_sq / m.size() - mean * mean;
  CHECK(std::abs(mean - (-0.2)) < 0.01);
  CHECK(std::abs(var - 2.96) < 0.05);
}

TEST_CASE("true_theta_ad") {
  // Single standard normal component: integral of phi^2 = (2 sqrt(pi))^-1.
  const MixedNormalParams normal{0.5, 0.0, 1.0, 0.0, 1.0};
  CHECK(true_theta_ad(normal) == doctest::Approx(0.2820947917738781).epsilon(1e-9));

  // Well-separated equal components.
  const MixedNormalParams separated{0.5, -10.0, 1.0, 10.0, 1.0};
  CHECK(std::abs(true_theta_ad(separated) - 0.1410473958869391) < 1e-6);

  // Paper-style defaults: quadrature and the closed form agree; both are
  // logged by the CLI rather than asserted against any external constant.
  const MixedNormalParams defaults{};
  const double quad = true_theta_ad(defaults);
  const double closed = mixed_normal_theta_closed_form(defaults);
  CHECK(quad == doctest::Approx(0.173169237635568).epsilon(1e-9));
  CHECK(closed == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("linear model sampling") {
  const std::vector<double> beta{1.0, 1.0, 1.0};
  RngStream r1(77);
  RngStream r2(77);
  const Dataset a = sample_linear_model(3, beta, 500, r1);
  const Dataset b = sample_linear_model(3, beta, 500, r2);
  CHECK(a.response(499) == b.response(499));
  CHECK(a.coord(499, 2) == b.coord(499, 2));

  RngStream big(88);
  const Dataset m = sample_linear_model(3, beta, 1000000, big);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sum += m.response(i);
    sum_sq += m.response(i) * m.response(i);
  }
  const double mean = sum / m.size();
  const double var = sum_sq / m.size() - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 4.0) < 0.05);

  const std::vector<double> zero{0.0};
  RngStream rz(9);
  const Dataset z = sample_linear_model(1, zero, 100000, rz);
  double zsum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) zsum += z.response(i);
  CHECK(std::abs(zsum / z.size()) < 0.01);
}

TEST_CASE("true_theta_dwad") {
  const std::vector<double> b1{1.0};
  CHECK(true_theta_dwad(1, b1, 0) == doctest::Approx(0.2820947917738781).epsilon(1e-12));
  const std::vector<double> b3{1.0, 1.0, 1.0};
  CHECK(true_theta_dwad(3, b3, 0) == doctest::Approx(0.02244839026564582).epsilon(1e-12));
  const std::vector<double> b0{0.0, 0.0, 0.0};
  CHECK(true_theta_dwad(3, b0, 1) == 0.0);
  CHECK_THROWS_AS((void)true_theta_dwad(3, b3, 3), std::invalid_argument);

  // Simulation oracle cross-check at its own statistical precision.
  const double mc = dwad_theta_mc_oracle(3, b3, 0, 2000000, 4242);
  CHECK(std::abs(mc - 0.02244839026564582) < 2e-4);
}

TEST_CASE("mse_decomposition") {
  const std::vector<double> same{2.0, 2.0, 2.0};
  MseDecomposition d = mse_decomposition(same, 2.0);
  CHECK(d.bias == 0.0);
  CHECK(d.variance == 0.0);
  CHECK(d.mse == 0.0);

  const std::vector<double> spread{1.0, 2.0, 3.0};
  d = mse_decomposition(spread, 2.0);
  CHECK(d.bias == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d.variance == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(d.mse == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const std::vector<double> two{1.0, 3.0};
  d = mse_decomposition(two, 1.0);
  CHECK(d.bias == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.variance == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.mse == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS((void)mse_decomposition({}, 0.0), std::invalid_argument);
}

TEST_CASE("coverage_rate") {
  using CI = std::pair<double, double>;
  const std::vector<CI> all{{0.0, 1.0}, {0.2, 0.9}, {-1.0, 2.0}};
  CHECK(coverage_rate(all, 0.5) == doctest::Approx(1.0));
  const std::vector<CI> two_of_three{{0.0, 1.0}, {0.6, 0.9}, {-1.0, 2.0}};
  CHECK(coverage_rate(two_of_three, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(coverage_rate(two_of_three, 5.0) == 0.0);
  CHECK_THROWS_AS((void)coverage_rate({}, 0.0), std::invalid_argument);
}

namespace {
ExperimentConfig small_ad_config() {
  ExperimentConfig cfg;
  cfg.estimator = EstimatorKind::AverageDensity;
  cfg.dgp = DgpKind::MixedNormal;
  cfg.n = 40;
  cfg.replications = 8;
  cfg.bandwidths = {0.1, 0.2, 0.3};
  cfg.methods = {MethodId::Raw, MethodId::Abc, MethodId::Msj};
  cfg.msj_etas = {1.0, 1.25};
  cfg.msj_exponents = {2.0};
  cfg.master_seed = 777;
  return cfg;
}
}  // namespace

TEST_CASE("run_experiment: single replication, raw only") {
  ExperimentConfig cfg = small_ad_config();
  cfg.replications = 1;
  cfg.bandwidths = {0.2};
  cfg.methods = {MethodId::Raw};
  const MonteCarloReport report = run_experiment(cfg, 1);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].variance == 0.0);
  CHECK(report.cells[0].mse ==
        doctest::Approx(report.cells[0].bias * report.cells[0].bias).epsilon(1e-15));
  CHECK(report.cells[0].tstats.size() == 1);
}

TEST_CASE("run_experiment: deterministic across thread counts") {
  const ExperimentConfig cfg = small_ad_config();
  const MonteCarloReport a = run_experiment(cfg, 1);
  const MonteCarloReport b = run_experiment(cfg, 8);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].bias == b.cells[i].bias);
    CHECK(a.cells[i].variance == b.cells[i].variance);
    CHECK(a.cells[i].coverage == b.cells[i].coverage);
    for (std::size_t r = 0; r < a.cells[i].tstats.size(); ++r) {
      CHECK(a.cells[i].tstats[r] == b.cells[i].tstats[r]);
    }
  }
  CHECK(render_report_csv(a) == render_report_csv(b));
  CHECK(render_tstats_csv(a) == render_tstats_csv(b));
}

TEST_CASE("run_experiment: mse identity and cell ordering") {
  const MonteCarloReport report = run_experiment(small_ad_config(), 4);
  REQUIRE(report.cells.size() == 9);
  for (const ReportCell& cell : report.cells) {
    CHECK(cell.mse ==
          doctest::Approx(cell.bias * cell.bias + cell.variance).epsilon(1e-12));
    CHECK(cell.coverage >= 0.0);
    CHECK(cell.coverage <= 1.0);
  }
  for (std::size_t i = 1; i < report.cells.size(); ++i) {
    const auto& prev = report.cells[i - 1];
    const auto& cur = report.cells[i];
    const bool ordered = method_name(prev.method) < method_name(cur.method) ||
                         (prev.method == cur.method && prev.h < cur.h);
    CHECK(ordered);
  }
}

TEST_CASE("run_experiment: isd and dwad smoke") {
  ExperimentConfig isd;
  isd.estimator = EstimatorKind::IntegratedSquaredDensity;
  isd.dgp = DgpKind::MixedNormal;
  isd.n = 30;
  isd.replications = 4;
  isd.bandwidths = {0.2, 0.4};
  isd.methods = {MethodId::Raw, MethodId::Abc, MethodId::Msj};
  isd.msj_etas = {0.6, 0.8, 1.0, 1.2, 1.4};
  isd.msj_exponents = {2.0, 4.0, 6.0, -1.0};
  isd.master_seed = 99;
  const MonteCarloReport r_isd = run_experiment(isd, 4);
  CHECK(r_isd.cells.size() == 6);
  for (const ReportCell& cell : r_isd.cells) {
    if (cell.method == MethodId::Abc) {
      CHECK(cell.mean_b_nl > 0.0);  // closed-form term is always positive
    }
  }

  ExperimentConfig dwad;
  dwad.estimator = EstimatorKind::DensityWeightedAvgDerivative;
  dwad.dgp = DgpKind::LinearModel;
  dwad.dim = 3;
  dwad.beta = {1.0, 1.0, 1.0};
  dwad.component = 0;
  dwad.n = 30;
  dwad.replications = 4;
  dwad.bandwidths = {0.5, 0.8};
  dwad.methods = {MethodId::Raw, MethodId::Abc, MethodId::Msj};
  dwad.msj_etas = {1.0, 1.25};
  dwad.msj_exponents = {2.0};
  dwad.master_seed = 41;
  const MonteCarloReport r_dwad = run_experiment(dwad, 4);
  CHECK(r_dwad.cells.size() == 6);
  CHECK(r_dwad.theta0 == doctest::Approx(0.02244839026564582).epsilon(1e-12));
}

TEST_CASE("run_experiment: bootstrap-based intervals") {
  ExperimentConfig cfg = small_ad_config();
  cfg.replications = 4;
  cfg.bandwidths = {0.2};
  cfg.bootstrap_p = 24;
  const MonteCarloReport a = run_experiment(cfg, 1);
  const MonteCarloReport b = run_experiment(cfg, 8);
  REQUIRE(a.cells.size() == 3);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].coverage == b.cells[i].coverage);
    for (std::size_t r = 0; r < a.cells[i].tstats.size(); ++r) {
      CHECK(a.cells[i].tstats[r] == b.cells[i].tstats[r]);
      CHECK(std::isfinite(a.cells[i].tstats[r]));
    }
  }

  // Bootstrap variances differ from the plug-in ones.
  ExperimentConfig plain = cfg;
  plain.bootstrap_p.reset();
  const MonteCarloReport c = run_experiment(plain, 1);
  CHECK(a.cells[0].tstats[0] != c.cells[0].tstats[0]);
}

TEST_CASE("t-statistics are near-pivotal at n=1000") {
  // With the bias removed, sqrt(n)(theta - theta0)/sigma_hat should be
  // close to standard normal; check the sample variance of the t draws.
  ExperimentConfig cfg;
  cfg.estimator = EstimatorKind::AverageDensity;
  cfg.n = 1000;
  cfg.replications = 300;
  cfg.bandwidths = {0.1};
  cfg.methods = {MethodId::Abc};
  cfg.msj_etas = {1.0, 1.25};
  cfg.msj_exponents = {2.0};
  cfg.master_seed = 31337;
  const MonteCarloReport report = run_experiment(cfg, 0);
  REQUIRE(report.cells.size() == 1);
  const std::vector<double>& t = report.cells[0].tstats;
  double sum = 0.0, sum_sq = 0.0;
  for (double v : t) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / t.size();
  const double var = sum_sq / t.size() - mean * mean;
  CHECK(var >= 0.8);
  CHECK(var <= 1.25);
  CHECK(std::abs(mean) < 0.35);
}

TEST_CASE("config validation errors name the field") {
  ExperimentConfig cfg = small_ad_config();
  cfg.bandwidths = {0.2, 0.1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_ad_config();
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_ad_config();
  cfg.msj_etas = {1.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_ad_config();
  cfg.methods = {MethodId::Raw, MethodId::Raw};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_SUITE_END();
