#include "ctdnet/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace ctdnet {

void one_step_feature_prediction(std::span<const double> y, const QuestionNetwork& net,
                                 std::span<const double> psi_values, bool normalize,
                                 std::span<double> out) {
  if (y.size() != net.node_count()) {
    throw std::invalid_argument("one_step_feature_prediction: prediction length mismatch");
  }
  if (out.size() != net.feature_count()) {
    throw std::invalid_argument("one_step_feature_prediction: output length mismatch");
  }
  if (net.controlled() ? psi_values.size() != net.activation_count() : !psi_values.empty()) {
    throw std::invalid_argument("one_step_feature_prediction: activations present iff controlled");
  }
  for (std::size_t f = 0; f < net.feature_count(); ++f) {
    const auto& children = net.children_of_feature(f);
    if (!net.controlled()) {
      if (children.size() != 1) {
        throw std::invalid_argument("one_step_feature_prediction: feature needs exactly one child");
      }
      out[f] = y[children.front().node];
      continue;
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& c : children) {
      const double w = c.condition ? psi_values[*c.condition] : 1.0;
      num += w * y[c.node];
      den += w;
    }
    if (normalize) {
      if (den == 0.0) {
        throw std::domain_error("one_step_feature_prediction: zero total action activation");
      }
      out[f] = num / den;
    } else {
      out[f] = num;
    }
  }
}

std::vector<double> one_step_feature_prediction(std::span<const double> y,
                                                const QuestionNetwork& net,
                                                std::span<const double> psi_values,
                                                bool normalize) {
  std::vector<double> out(net.feature_count());
  one_step_feature_prediction(y, net, psi_values, normalize, out);
  return out;
}

double rmse_step(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size() || predicted.empty()) {
    throw std::invalid_argument("rmse_step: lengths must match and be non-zero");
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < predicted.size(); ++f) {
    const double e = predicted[f] - actual[f];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace ctdnet
