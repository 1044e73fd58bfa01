#include "semibias/dataset.hpp"

#include <stdexcept>

namespace semibias {

Dataset::Dataset(std::vector<double> points_flat, int dim,
                 std::vector<double> responses)
    : points_(std::move(points_flat)),
      responses_(std::move(responses)),
      dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("Dataset: dimension must be positive");
  if (points_.size() % dim_ != 0) {
    throw std::invalid_argument("Dataset: point buffer size is not a multiple of dim");
  }
  n_ = points_.size() / dim_;
  if (!responses_.empty() && responses_.size() != n_) {
    throw std::invalid_argument("Dataset: responses length must equal sample size");
  }
}

Dataset Dataset::univariate(std::vector<double> xs, std::vector<double> ys) {
  return Dataset(std::move(xs), 1, std::move(ys));
}

double Dataset::min_coord(int c) const {
  if (n_ == 0) throw std::invalid_argument("Dataset: empty sample");
  double m = coord(0, c);
  for (std::size_t i = 1; i < n_; ++i) m = std::min(m, coord(i, c));
  return m;
}

double Dataset::max_coord(int c) const {
  if (n_ == 0) throw std::invalid_argument("Dataset: empty sample");
  double m = coord(0, c);
  for (std::size_t i = 1; i < n_; ++i) m = std::max(m, coord(i, c));
  return m;
}

}  // namespace semibias
