#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctdnet {

/// Axis-aligned box in R^dim with low[k] < high[k] in every dimension.
class BoxBounds {
 public:
  /// Throws std::invalid_argument on empty, mismatched or inverted bounds.
  BoxBounds(std::vector<double> low, std::vector<double> high);

  /// The same [low, high] interval in each of `dim` dimensions.
  static BoxBounds uniform(std::size_t dim, double low, double high);

  std::size_t dim() const noexcept { return low_.size(); }
  std::span<const double> low() const noexcept { return low_; }
  std::span<const double> high() const noexcept { return high_; }
  bool contains(std::span<const double> point) const;
  /// Componentwise clamp of `point` into the box.
  void clamp(std::span<double> point) const;

  friend bool operator==(const BoxBounds&, const BoxBounds&) = default;

 private:
  std::vector<double> low_;
  std::vector<double> high_;
};

/// Evenly tiled spherical radial basis functions
///
///   f_i(p) = exp(-||p - c_i||^2 / (2 * width))
///
/// `width` is the variance scale of the spherical covariance (width * I), not a
/// standard deviation. Centers are the Cartesian product of per-dimension
/// linearly spaced coordinates that include both interval endpoints; with a
/// single function per dimension the center sits at the lower bound. The last
/// dimension varies fastest in center order.
///
/// Used both for observation features and for action activations. Immutable.
class RbfGrid {
 public:
  /// Throws std::invalid_argument if per_dim_count == 0 or width <= 0.
  RbfGrid(BoxBounds bounds, std::size_t per_dim_count, double width);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return bounds_.dim(); }
  std::size_t per_dim_count() const noexcept { return per_dim_count_; }
  double width() const noexcept { return width_; }
  const BoxBounds& bounds() const noexcept { return bounds_; }

  std::span<const double> center(std::size_t i) const;

  /// Activations of every function at `point` (which may lie outside the
  /// bounds). Throws std::invalid_argument on a dimension mismatch.
  void evaluate(std::span<const double> point, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> point) const;

 private:
  BoxBounds bounds_;
  std::size_t per_dim_count_;
  double width_;
  std::size_t count_;
  std::vector<double> centers_;  // count_ x dim, row-major
};

RbfGrid make_grid(const BoxBounds& bounds, std::size_t per_dim_count, double width);

}  // namespace ctdnet
