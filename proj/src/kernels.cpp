#include "semibias/kernels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "semibias/summation.hpp"

namespace semibias {

namespace {
constexpr double kTwoPi = 6.283185307179586;

double sq_norm(std::span<const double> u) {
  double r2 = 0.0;
  for (double x : u) r2 += x * x;
  return r2;
}
}  // namespace

Kernel::Kernel(int dim, std::vector<Component> comps)
    : dim_(dim), comps_(std::move(comps)) {
  if (dim_ < 1) throw std::invalid_argument("Kernel: dimension must be positive");
  normalize_components();
  order_ = compute_order();
}

void Kernel::normalize_components() {
  // Merge components with equal variance; drop numerically vanished ones.
  std::vector<Component> merged;
  for (const Component& c : comps_) {
    if (c.variance <= 0.0) throw std::invalid_argument("Kernel: component variance must be positive");
    bool found = false;
    for (Component& m : merged) {
      if (m.variance == c.variance) {
        m.weight += c.weight;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(c);
  }
  std::erase_if(merged, [](const Component& c) { return c.weight == 0.0; });
  comps_ = std::move(merged);

  norm_.resize(comps_.size());
  inv2v_.resize(comps_.size());
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    norm_[j] = std::pow(kTwoPi * comps_[j].variance, -0.5 * dim_);
    inv2v_[j] = 0.5 / comps_[j].variance;
  }
}

int Kernel::compute_order() const {
  // First non-vanishing even moment (odd moments vanish by symmetry).
  // Per-axis moments of a Gaussian mixture: mu_2 = sum w v,
  // mu_4 = 3 sum w v^2, mu_6 = 15 sum w v^3, ...
  double factor = 1.0;
  for (int m = 2; m <= 8; m += 2) {
    factor *= (m - 1);  // double factorial (m-1)!!
    double moment = 0.0;
    for (const Component& c : comps_) moment += c.weight * std::pow(c.variance, m / 2);
    if (std::abs(factor * moment) > 1e-12) return m;
  }
  return 8;
}

Kernel Kernel::gaussian(int dim) { return Kernel(dim, {{1.0, 1.0}}); }

Kernel Kernel::convolve(const Kernel& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("Kernel::convolve: dimension mismatch");
  std::vector<Component> out;
  out.reserve(comps_.size() * other.comps_.size());
  for (const Component& a : comps_)
    for (const Component& b : other.comps_)
      out.push_back({a.weight * b.weight, a.variance + b.variance});
  return Kernel(dim_, std::move(out));
}

Kernel Kernel::self_convolution() const { return convolve(*this); }

Kernel Kernel::twicing() const {
  Kernel conv = self_convolution();
  std::vector<Component> out;
  out.reserve(comps_.size() + conv.comps_.size());
  for (const Component& c : comps_) out.push_back({2.0 * c.weight, c.variance});
  for (const Component& c : conv.comps_) out.push_back({-c.weight, c.variance});
  return Kernel(dim_, std::move(out));
}

Kernel Kernel::linear_combination(std::span<const double> coeffs,
                                  std::span<const Kernel> kernels) {
  if (coeffs.empty() || coeffs.size() != kernels.size()) {
    throw std::invalid_argument("Kernel::linear_combination: size mismatch");
  }
  const int dim = kernels[0].dim_;
  std::vector<Component> out;
  for (std::size_t q = 0; q < kernels.size(); ++q) {
    if (kernels[q].dim_ != dim) {
      throw std::invalid_argument("Kernel::linear_combination: dimension mismatch");
    }
    for (const Component& c : kernels[q].comps_) {
      out.push_back({coeffs[q] * c.weight, c.variance});
    }
  }
  return Kernel(dim, std::move(out));
}

Kernel Kernel::scale_bandwidth(double eta) const {
  if (eta <= 0.0) throw std::invalid_argument("Kernel::scale_bandwidth: eta must be positive");
  std::vector<Component> out = comps_;
  for (Component& c : out) c.variance *= eta * eta;
  return Kernel(dim_, std::move(out));
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os << "gaussian-mixture[d=" << dim_ << ", m=" << order_ << "]{";
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    if (j) os << ", ";
    os << comps_[j].weight << "*N(0," << comps_[j].variance << ")";
  }
  os << "}";
  return os.str();
}

double Kernel::eval_r2(double r2) const {
  double v = 0.0;
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    v += comps_[j].weight * norm_[j] * std::exp(-r2 * inv2v_[j]);
  }
  return v;
}

double Kernel::gradient_factor_r2(double r2) const {
  // d/du_c K(u) = u_c * sum_j w_j norm_j * (-1/v_j) exp(-r2 / (2 v_j))
  double g = 0.0;
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    g -= comps_[j].weight * norm_[j] * 2.0 * inv2v_[j] * std::exp(-r2 * inv2v_[j]);
  }
  return g;
}

double Kernel::eval(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_) {
    throw std::invalid_argument("Kernel::eval: dimension mismatch");
  }
  return eval_r2(sq_norm(u));
}

double Kernel::eval1(double u) const {
  if (dim_ != 1) throw std::invalid_argument("Kernel::eval1: kernel is not univariate");
  return eval_r2(u * u);
}

double Kernel::eval_scaled(double h, std::span<const double> diff) const {
  if (!(h > 0.0)) throw std::invalid_argument("Kernel::eval_scaled: bandwidth must be positive");
  if (static_cast<int>(diff.size()) != dim_) {
    throw std::invalid_argument("Kernel::eval_scaled: dimension mismatch");
  }
  double r2 = 0.0;
  for (double x : diff) {
    const double s = x / h;
    r2 += s * s;
  }
  return eval_r2(r2) / std::pow(h, dim_);
}

void Kernel::gradient(std::span<const double> u, std::span<double> grad) const {
  if (static_cast<int>(u.size()) != dim_ || grad.size() != u.size()) {
    throw std::invalid_argument("Kernel::gradient: dimension mismatch");
  }
  const double g = gradient_factor_r2(sq_norm(u));
  for (std::size_t c = 0; c < u.size(); ++c) grad[c] = u[c] * g;
}

double Kernel::at_zero() const { return eval_r2(0.0); }

double Kernel::l2_norm_sq() const {
  // int (sum w_a N_{v_a}) (sum w_b N_{v_b}) = sum_ab w_a w_b N_{v_a+v_b}(0).
  double total = 0.0;
  for (const Component& a : comps_)
    for (const Component& b : comps_)
      total += a.weight * b.weight * std::pow(kTwoPi * (a.variance + b.variance), -0.5 * dim_);
  return total;
}

double Kernel::second_moment() const {
  double m2 = 0.0;
  for (const Component& c : comps_) m2 += c.weight * c.variance;
  return m2;
}

double convolve_numeric_1d(const Kernel& k, double u, double span, int points) {
  if (k.dim() != 1) throw std::invalid_argument("convolve_numeric_1d: univariate kernels only");
  if (points < 2) throw std::invalid_argument("convolve_numeric_1d: need at least 2 points");
  const double step = 2.0 * span / (points - 1);
  PairwiseAccumulator acc;
  for (int i = 0; i < points; ++i) {
    const double t = -span + i * step;
    const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    acc.add(w * k.eval1(u - t) * k.eval1(t));
  }
  return acc.total() * step;
}

}  // namespace semibias
