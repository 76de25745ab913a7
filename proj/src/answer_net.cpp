#include "ctdnet/answer_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctdnet/error.hpp"
#include "ctdnet/simd/kernels.hpp"

namespace ctdnet {

namespace {

void check_segment(const char* name, std::size_t got, std::size_t want) {
  if (got != want) {
    throw std::invalid_argument(std::string("assemble_input: ") + name + " has length " +
                                std::to_string(got) + ", expected " + std::to_string(want));
  }
}

}  // namespace

void assemble_input_into(InputVector& x, std::span<const double> y_prev,
                         std::span<const double> features, std::span<const double> activations) {
  const InputLayout& layout = x.layout_;
  check_segment("y_prev", y_prev.size(), layout.nodes);
  check_segment("features", features.size(), layout.features);
  check_segment("activations", activations.size(), layout.activations);
  auto out = x.values_.begin();
  out = std::copy(y_prev.begin(), y_prev.end(), out);
  out = std::copy(features.begin(), features.end(), out);
  std::copy(activations.begin(), activations.end(), out);
}

InputVector assemble_input(const InputLayout& layout, std::span<const double> y_prev,
                           std::span<const double> features, std::span<const double> activations) {
  InputVector x(layout);
  assemble_input_into(x, y_prev, features, activations);
  return x;
}

double WeightMatrix::max_abs() const { return simd::max_abs(w_.data(), w_.size()); }

void predict(const WeightMatrix& w, std::span<const double> x, std::span<double> y) {
  if (x.size() != w.cols()) {
    throw std::invalid_argument("predict: input length " + std::to_string(x.size()) +
                                " does not match " + std::to_string(w.cols()) + " columns");
  }
  if (y.size() != w.rows()) throw std::invalid_argument("predict: output length mismatch");
  simd::gemv(w.data().data(), w.rows(), w.cols(), x.data(), y.data());
  if (!simd::all_finite(y.data(), y.size())) {
    const auto bad = std::find_if(y.begin(), y.end(), [](double v) { return !std::isfinite(v); });
    const auto row = static_cast<std::size_t>(bad - y.begin());
    throw NonFiniteError(row, "predict: non-finite prediction at node " + std::to_string(row));
  }
}

PredictionVector predict(const WeightMatrix& w, std::span<const double> x) {
  PredictionVector y(w.rows());
  predict(w, x, y);
  return y;
}

void apply_row_update(WeightMatrix& w, std::size_t row, double scale,
                      std::span<const double> x_stored) {
  if (row >= w.rows()) throw std::out_of_range("apply_row_update: row out of range");
  if (x_stored.size() != w.cols()) throw std::invalid_argument("apply_row_update: length mismatch");
  if (scale == 0.0) return;
  auto r = w.row(row);
  simd::axpy(scale, x_stored.data(), r.data(), r.size());
  if (!simd::all_finite(r.data(), r.size())) {
    throw NonFiniteError(row, "apply_row_update: non-finite weight in row " + std::to_string(row));
  }
}

}  // namespace ctdnet
