#include "semibias/bias_correction.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "semibias/summation.hpp"

namespace semibias {

namespace {

// Dense LU with partial pivoting; Q is tiny (<= 8 in practice).
class SmallMatrix {
public:
  explicit SmallMatrix(std::size_t q) : q_(q), a_(q * q, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a_[r * q_ + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * q_ + c]; }
  std::size_t size() const { return q_; }

  // Solves A x = b in place; throws on singularity.
  std::vector<double> solve(std::vector<double> b) const {
    std::size_t q = q_;
    std::vector<double> a = a_;
    std::vector<std::size_t> perm(q);
    for (std::size_t i = 0; i < q; ++i) perm[i] = i;
    for (std::size_t col = 0; col < q; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < q; ++r) {
        if (std::abs(a[r * q + col]) > std::abs(a[piv * q + col])) piv = r;
      }
      if (std::abs(a[piv * q + col]) < 1e-300) {
        throw std::invalid_argument("singular weight system (duplicate scale factors?)");
      }
      if (piv != col) {
        for (std::size_t c = 0; c < q; ++c) std::swap(a[col * q + c], a[piv * q + c]);
        std::swap(b[col], b[piv]);
      }
      for (std::size_t r = col + 1; r < q; ++r) {
        const double f = a[r * q + col] / a[col * q + col];
        a[r * q + col] = 0.0;
        for (std::size_t c = col + 1; c < q; ++c) a[r * q + c] -= f * a[col * q + c];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> x(q);
    for (std::size_t ri = q; ri-- > 0;) {
      double s = b[ri];
      for (std::size_t c = ri + 1; c < q; ++c) s -= a[ri * q + c] * x[c];
      x[ri] = s / a[ri * q + ri];
    }
    return x;
  }

  // 1-norm condition estimate via explicit inverse (fine at this size).
  double condition_estimate() const {
    const std::size_t q = q_;
    double norm_a = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < q; ++r) s += std::abs(at(r, c));
      norm_a = std::max(norm_a, s);
    }
    double norm_inv = 0.0;
    for (std::size_t c = 0; c < q; ++c) {
      std::vector<double> e(q, 0.0);
      e[c] = 1.0;
      const std::vector<double> col = solve(std::move(e));
      double s = 0.0;
      for (double v : col) s += std::abs(v);
      norm_inv = std::max(norm_inv, s);
    }
    return norm_a * norm_inv;
  }

private:
  std::size_t q_;
  std::vector<double> a_;
};

}  // namespace

std::vector<double> solve_msj_weights(std::span<const double> etas,
                                      std::span<const double> exponents,
                                      double* condition_out) {
  const std::size_t q = etas.size();
  if (q == 0) throw std::invalid_argument("solve_msj_weights: need at least one scale");
  if (exponents.size() + 1 != q) {
    throw std::invalid_argument("solve_msj_weights: need len(etas) == len(exponents) + 1");
  }
  for (std::size_t a = 0; a < q; ++a) {
    if (!(etas[a] > 0.0)) throw std::invalid_argument("solve_msj_weights: etas must be positive");
    for (std::size_t b = a + 1; b < q; ++b) {
      if (etas[a] == etas[b]) {
        throw std::invalid_argument("solve_msj_weights: etas must be pairwise distinct");
      }
    }
  }

  SmallMatrix m(q);
  for (std::size_t c = 0; c < q; ++c) m.at(0, c) = 1.0;
  for (std::size_t r = 0; r < exponents.size(); ++r) {
    if (exponents[r] == 0.0) {
      throw std::invalid_argument("solve_msj_weights: exponents must be nonzero");
    }
    for (std::size_t c = 0; c < q; ++c) m.at(r + 1, c) = std::pow(etas[c], exponents[r]);
  }

  std::vector<double> rhs(q, 0.0);
  rhs[0] = 1.0;
  std::vector<double> w = m.solve(rhs);

  const double cond = m.condition_estimate();
  if (condition_out != nullptr) *condition_out = cond;
  if (cond > 1e8) {
    std::clog << "warning: jackknife weight system is ill-conditioned (cond ~ "
              << cond << "); weights may be inaccurate\n";
  }
  return w;
}

JackknifeScheme make_scheme(std::vector<double> etas,
                            std::vector<double> exponents,
                            double base_bandwidth) {
  if (!(base_bandwidth > 0.0)) {
    throw std::invalid_argument("make_scheme: base bandwidth must be positive");
  }
  JackknifeScheme s;
  s.weights = solve_msj_weights(etas, exponents);
  s.etas = std::move(etas);
  s.exponents = std::move(exponents);
  s.base_bandwidth = base_bandwidth;
  return s;
}

std::vector<double> default_scheme_exponents(MsjPreset preset, int m, int d) {
  if (m <= 0 || m % 2 != 0) throw std::invalid_argument("kernel order m must be even and positive");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const double dm = m;
  switch (preset) {
    case MsjPreset::TwoScaleSmoothing:
      return {dm};
    case MsjPreset::TwoScaleNonlinear:
      return {static_cast<double>(-d)};
    case MsjPreset::ThreeScale:
      return {dm, static_cast<double>(-d)};
    case MsjPreset::FiveScaleEven:
      return {dm, dm + 2, dm + 4, static_cast<double>(-d)};
  }
  throw std::invalid_argument("unknown jackknife preset");
}

double msj_estimate(const std::function<double(double)>& estimate_at_h,
                    const JackknifeScheme& scheme) {
  if (scheme.weights.size() != scheme.etas.size() || scheme.etas.empty()) {
    throw std::invalid_argument("msj_estimate: scheme is not solved");
  }
  double total = 0.0;
  for (std::size_t q = 0; q < scheme.etas.size(); ++q) {
    total += scheme.weights[q] *
             estimate_at_h(scheme.etas[q] * scheme.base_bandwidth);
  }
  return total;
}

double msj_ad(const Dataset& data, const Kernel& kernel,
              const JackknifeScheme& scheme) {
  return msj_estimate([&](double h) { return ad_estimate(data, kernel, h); },
                      scheme);
}

double msj_isd(const Dataset& data, const Kernel& kernel,
               const JackknifeScheme& scheme, const GridSpec& grid) {
  return msj_estimate(
      [&](double h) { return isd_estimate(data, kernel, h, grid); }, scheme);
}

double msj_dwad(const Dataset& data, const Kernel& kernel,
                const JackknifeScheme& scheme, int component) {
  return msj_estimate(
      [&](double h) { return dwad_estimate(data, kernel, h, component); },
      scheme);
}

AbcAdResult abc_ad(const Dataset& data, const Kernel& kernel, double h) {
  // b_anb = mean_i [ smoothed_loo_i - loo_i ]; corrected = raw - b_anb, which
  // algebraically equals the average density estimate under 2K - K*K.
  const Kernel conv = kernel.self_convolution();
  const std::vector<double> loo = loo_kde_values(data, kernel, h);
  const std::vector<double> smoothed = loo_kde_values(data, conv, h);
  PairwiseAccumulator diff;
  for (std::size_t i = 0; i < loo.size(); ++i) diff.add(smoothed[i] - loo[i]);
  AbcAdResult r;
  r.b_anb_hat = diff.total() / static_cast<double>(loo.size());
  r.corrected = sample_mean(loo) - r.b_anb_hat;
  return r;
}

AbcIsdResult abc_isd(const Dataset& data, const Kernel& kernel, double h,
                     const GridSpec& grid) {
  if (data.dim() != 1) throw std::invalid_argument("abc_isd: univariate samples only");
  if (!(h > 0.0)) throw std::invalid_argument("abc_isd: bandwidth must be positive");
  const std::size_t n = data.size();
  AbcIsdResult r;
  // (1/n^2) sum_i int K_h(x - z_i)^2 dx = int K^2 / (n h^d), location-free.
  r.b_nl_hat = kernel.l2_norm_sq() /
               (static_cast<double>(n) * std::pow(h, data.dim()));
  const Kernel conv = kernel.self_convolution();
  r.b_anb_hat = grid_integrate(
      [&](double x) {
        const double g = kde(data, kernel, h, {&x, 1});
        const double g_bar = kde(data, conv, h, {&x, 1});
        return 2.0 * g * (g_bar - g);
      },
      grid);
  r.corrected = isd_estimate(data, kernel, h, grid) - r.b_nl_hat - r.b_anb_hat;
  return r;
}

AbcDwadResult abc_dwad(const Dataset& data, const Kernel& kernel, double h,
                       int component) {
  const double raw = dwad_estimate(data, kernel, h, component);
  const double smoothed =
      dwad_estimate(data, kernel.self_convolution(), h, component);
  AbcDwadResult r;
  r.b_nl_hat = smoothed - raw;
  r.corrected = raw - r.b_nl_hat;  // = 2 raw - smoothed, the twicing form
  return r;
}

}  // namespace semibias
