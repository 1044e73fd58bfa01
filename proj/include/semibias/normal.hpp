#pragma once

namespace semibias {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile for p in (0,1). Acklam's rational approximation
// refined by one Halley step; absolute error is well below 1e-9 over the
// full open interval. Throws std::invalid_argument outside (0,1).
double normal_quantile(double p);

// Density of N(mu, sigma_sq) at x.
double normal_pdf(double x, double mu = 0.0, double sigma_sq = 1.0);

}  // namespace semibias
