#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace semibias {

// Streaming pairwise (binary tree) summation. Accumulates partial sums per
// power-of-two level so long accumulations keep O(log n) rounding growth
// instead of O(n). Order of add() calls is part of the result, so callers
// that need reproducible output must feed terms in a fixed order.
class PairwiseAccumulator {
public:
  void add(double x) {
    std::uint64_t c = ++count_;
    int level = 0;
    while ((c & 1u) == 0u) {
      x += partials_[level];
      ++level;
      c >>= 1;
    }
    partials_[level] = x;
  }

  double total() const {
    double sum = 0.0;
    std::uint64_t c = count_;
    for (int level = 0; c != 0; ++level, c >>= 1) {
      if (c & 1u) sum += partials_[level];
    }
    return sum;
  }

  std::uint64_t count() const { return count_; }

private:
  double partials_[64] = {};
  std::uint64_t count_ = 0;
};

inline double pairwise_sum(std::span<const double> values) {
  PairwiseAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.total();
}

inline double sample_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

// ddof = 1 gives the unbiased sample variance, ddof = 0 the population form.
inline double sample_variance(std::span<const double> values, int ddof = 1) {
  const std::size_t n = values.size();
  if (n <= static_cast<std::size_t>(ddof)) return 0.0;
  const double mean = sample_mean(values);
  PairwiseAccumulator acc;
  for (double v : values) {
    const double d = v - mean;
    acc.add(d * d);
  }
  return acc.total() / static_cast<double>(n - static_cast<std::size_t>(ddof));
}

}  // namespace semibias
