#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctdnet {

using PredictionVector = std::vector<double>;

/// Segment sizes of the answer network input:
/// [previous predictions | observation features | action activations].
struct InputLayout {
  std::size_t nodes = 0;
  std::size_t features = 0;
  std::size_t activations = 0;  // 0 when uncontrolled

  std::size_t size() const noexcept { return nodes + features + activations; }
  friend bool operator==(const InputLayout&, const InputLayout&) = default;
};

/// The answer network input x_t. No bias element.
class InputVector {
 public:
  explicit InputVector(InputLayout layout) : layout_(layout), values_(layout.size(), 0.0) {}

  const InputLayout& layout() const noexcept { return layout_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  std::span<const double> predictions() const { return values().subspan(0, layout_.nodes); }
  std::span<const double> features() const {
    return values().subspan(layout_.nodes, layout_.features);
  }
  std::span<const double> activations() const {
    return values().subspan(layout_.nodes + layout_.features, layout_.activations);
  }

 private:
  friend InputVector assemble_input(const InputLayout&, std::span<const double>,
                                    std::span<const double>, std::span<const double>);
  friend void assemble_input_into(InputVector&, std::span<const double>, std::span<const double>,
                                  std::span<const double>);
  InputLayout layout_;
  std::vector<double> values_;
};

/// Concatenate [y_prev, features, activations]. `activations` must be empty
/// for an uncontrolled layout. Throws std::invalid_argument on any length
/// mismatch.
InputVector assemble_input(const InputLayout& layout, std::span<const double> y_prev,
                           std::span<const double> features, std::span<const double> activations);

/// In-place variant of assemble_input reusing `x`'s storage and layout.
void assemble_input_into(InputVector& x, std::span<const double> y_prev,
                         std::span<const double> features, std::span<const double> activations);

/// Row-major node_count x input_length weights of the linear answer network.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  /// Zero-initialized.
  WeightMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), w_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> data() const noexcept { return w_; }
  std::span<double> data() noexcept { return w_; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(w_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(w_).subspan(i * cols_, cols_); }

  double& operator()(std::size_t i, std::size_t j) { return w_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return w_[i * cols_ + j]; }

  double max_abs() const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> w_;
};

/// y = W x with identity output. Throws std::invalid_argument on a shape
/// mismatch and NonFiniteError (carrying the row) if any output is not finite.
void predict(const WeightMatrix& w, std::span<const double> x, std::span<double> y);
PredictionVector predict(const WeightMatrix& w, std::span<const double> x);

/// W[row] += scale * x_stored. Throws NonFiniteError if the updated row holds
/// a non-finite entry.
void apply_row_update(WeightMatrix& w, std::size_t row, double scale,
                      std::span<const double> x_stored);

}  // namespace ctdnet
