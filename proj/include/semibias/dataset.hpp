#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace semibias {

// An i.i.d. sample of points z_i in R^d, optionally paired with scalar
// responses y_i (present for regression-type estimators). Points are stored
// row-major. Duplicate points are legal everywhere (bootstrap resamples
// contain them).
class Dataset {
public:
  Dataset() = default;
  // points_flat has size n*dim; responses is empty or has size n.
  Dataset(std::vector<double> points_flat, int dim,
          std::vector<double> responses = {});

  static Dataset univariate(std::vector<double> xs,
                            std::vector<double> ys = {});

  std::size_t size() const { return n_; }
  int dim() const { return dim_; }
  bool has_responses() const { return !responses_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  double coord(std::size_t i, int c) const { return points_[i * dim_ + c]; }
  double response(std::size_t i) const { return responses_[i]; }
  std::span<const double> responses() const { return responses_; }
  std::span<const double> flat_points() const { return points_; }

  // Resample n rows with replacement using the supplied index source.
  // Response rows travel with their points (pairs bootstrap).
  template <typename IndexFn>
  Dataset resample(IndexFn&& draw_index) const {
    std::vector<double> pts(points_.size());
    std::vector<double> resp(responses_.size());
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = draw_index(n_);
      for (int c = 0; c < dim_; ++c) pts[i * dim_ + c] = points_[j * dim_ + c];
      if (!responses_.empty()) resp[i] = responses_[j];
    }
    return Dataset(std::move(pts), dim_, std::move(resp));
  }

  // Range of the first coordinate (used for default integration grids).
  double min_coord(int c = 0) const;
  double max_coord(int c = 0) const;

private:
  std::vector<double> points_;
  std::vector<double> responses_;
  std::size_t n_ = 0;
  int dim_ = 1;
};

}  // namespace semibias
