#include "ctdnet/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctdnet/simd/kernels.hpp"

namespace ctdnet {

BoxBounds::BoxBounds(std::vector<double> low, std::vector<double> high)
    : low_(std::move(low)), high_(std::move(high)) {
  if (low_.empty()) throw std::invalid_argument("BoxBounds: dimension must be positive");
  if (low_.size() != high_.size()) {
    throw std::invalid_argument("BoxBounds: low and high have different lengths");
  }
  for (std::size_t k = 0; k < low_.size(); ++k) {
    if (!(low_[k] < high_[k])) {
      throw std::invalid_argument("BoxBounds: low >= high in dimension " + std::to_string(k));
    }
  }
}

BoxBounds BoxBounds::uniform(std::size_t dim, double low, double high) {
  return BoxBounds(std::vector<double>(dim, low), std::vector<double>(dim, high));
}

bool BoxBounds::contains(std::span<const double> point) const {
  if (point.size() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (point[k] < low_[k] || point[k] > high_[k]) return false;
  }
  return true;
}

void BoxBounds::clamp(std::span<double> point) const {
  if (point.size() != dim()) throw std::invalid_argument("BoxBounds::clamp: dimension mismatch");
  for (std::size_t k = 0; k < dim(); ++k) point[k] = std::clamp(point[k], low_[k], high_[k]);
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > static_cast<std::size_t>(1) << 24) throw std::invalid_argument("RbfGrid: too many centers");
    r *= base;
  }
  return r;
}

}  // namespace

RbfGrid::RbfGrid(BoxBounds bounds, std::size_t per_dim_count, double width)
    : bounds_(std::move(bounds)), per_dim_count_(per_dim_count), width_(width), count_(0) {
  if (per_dim_count_ == 0) throw std::invalid_argument("RbfGrid: per_dim_count must be >= 1");
  if (!(width_ > 0.0) || !std::isfinite(width_)) {
    throw std::invalid_argument("RbfGrid: width must be positive and finite");
  }
  const std::size_t dim = bounds_.dim();
  count_ = checked_power(per_dim_count_, dim);

  // Per-dimension coordinates, endpoints included.
  std::vector<std::vector<double>> axes(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double lo = bounds_.low()[k];
    const double hi = bounds_.high()[k];
    axes[k].resize(per_dim_count_);
    for (std::size_t j = 0; j < per_dim_count_; ++j) {
      if (per_dim_count_ == 1) {
        axes[k][j] = lo;
      } else if (j + 1 == per_dim_count_) {
        axes[k][j] = hi;
      } else {
        axes[k][j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(per_dim_count_ - 1);
      }
    }
  }

  centers_.resize(count_ * dim);
  for (std::size_t i = 0; i < count_; ++i) {
    std::size_t rem = i;
    for (std::size_t k = dim; k-- > 0;) {
      centers_[i * dim + k] = axes[k][rem % per_dim_count_];
      rem /= per_dim_count_;
    }
  }
}

std::span<const double> RbfGrid::center(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("RbfGrid::center: index out of range");
  return std::span<const double>(centers_).subspan(i * dim(), dim());
}

void RbfGrid::evaluate(std::span<const double> point, std::span<double> out) const {
  if (point.size() != dim()) throw std::invalid_argument("RbfGrid::evaluate: dimension mismatch");
  if (out.size() != count_) throw std::invalid_argument("RbfGrid::evaluate: output size mismatch");
  simd::sq_dist_rows(centers_.data(), count_, dim(), point.data(), out.data());
  const double two_width = 2.0 * width_;
  for (double& v : out) v = std::exp(-v / two_width);
}

std::vector<double> RbfGrid::evaluate(std::span<const double> point) const {
  std::vector<double> out(count_);
  evaluate(point, out);
  return out;
}

RbfGrid make_grid(const BoxBounds& bounds, std::size_t per_dim_count, double width) {
  return RbfGrid(bounds, per_dim_count, width);
}

}  // namespace ctdnet
