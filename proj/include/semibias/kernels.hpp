#pragma once

#include <span>
#include <string>
#include <vector>

namespace semibias {

// Symmetric smoothing kernel on R^d. The base family is the d-dimensional
// Gaussian product kernel N(0, I_d); derived kernels (self-convolutions,
// twicing kernels, and jackknife-style linear combinations) are represented
// exactly as signed mixtures of centered isotropic Gaussians
//
//     K(u) = sum_j  w_j * N(0, v_j I_d)(u),
//
// which is closed under convolution (variances add) and under the twicing
// map K -> 2K - K*K. All evaluations, gradients, K(0), and integral of K^2
// are therefore closed-form; no quadrature is needed on the hot paths.
//
// Immutable after construction; all member functions are const and safe for
// unrestricted concurrent use.
class Kernel {
public:
  struct Component {
    double weight;    // mixture weight (signed; weights sum to 1)
    double variance;  // per-axis variance of the Gaussian component
  };

  // Standard Gaussian product kernel on R^dim, order m = 2.
  static Kernel gaussian(int dim);

  // K*K. For a single Gaussian this is the N(0, 2 I_d) density.
  Kernel self_convolution() const;

  // Twicing kernel 2K - K*K; raises the effective order (for a Gaussian
  // base, the second moment 2*1 - 2 vanishes and the order becomes 4).
  Kernel twicing() const;

  // Convolution with another kernel of the same dimension.
  Kernel convolve(const Kernel& other) const;

  // Linear combination sum_q coeffs[q] * kernels[q] (all same dimension).
  // Used for multi-scale jackknife pair kernels; note a combination of
  // bandwidth-scaled kernels must be built via scaled components, see
  // scale_bandwidth().
  static Kernel linear_combination(std::span<const double> coeffs,
                                   std::span<const Kernel> kernels);

  // The kernel u -> K(u/eta)/eta^d as a Kernel in its own right (component
  // variances multiply by eta^2, weights are unchanged).
  Kernel scale_bandwidth(double eta) const;

  int dim() const { return dim_; }
  int order() const { return order_; }
  const std::vector<Component>& components() const { return comps_; }
  std::string describe() const;

  // K(u). Throws std::invalid_argument on dimension mismatch.
  double eval(std::span<const double> u) const;

  // K_h(diff) = K(diff/h) / h^d. Throws std::invalid_argument for h <= 0.
  double eval_scaled(double h, std::span<const double> diff) const;

  // grad K(u), written into grad (size d).
  void gradient(std::span<const double> u, std::span<double> grad) const;

  // Evaluation from the squared norm |u|^2 (the kernel is radial). The
  // gradient factor g(r2) satisfies grad K(u) = u * g(|u|^2).
  double eval_r2(double r2) const;
  double gradient_factor_r2(double r2) const;

  double at_zero() const;        // K(0)
  double l2_norm_sq() const;     // integral of K(u)^2 over R^d
  double second_moment() const;  // per-axis integral of u_c^2 K(u) du

  // Convenience for d = 1.
  double eval1(double u) const;

private:
  Kernel(int dim, std::vector<Component> comps);
  void normalize_components();
  int compute_order() const;

  int dim_ = 1;
  int order_ = 2;
  std::vector<Component> comps_;
  std::vector<double> norm_;     // (2 pi v_j)^{-d/2} per component
  std::vector<double> inv2v_;    // 1 / (2 v_j)
};

// Trapezoid-rule self-convolution of a univariate kernel evaluated at u,
// integrating K(u - t) K(t) dt over t in [-span, span] with `points` nodes.
// This is the generic fallback route for kernels without closed-form
// convolutions; the Gaussian mixture path never needs it, so its role here
// is cross-checking the closed forms.
double convolve_numeric_1d(const Kernel& k, double u, double span = 8.0,
                           int points = 2001);

}  // namespace semibias
