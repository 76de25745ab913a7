#include "ctdnet/validation/discrete_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

namespace ctdnet::validation {

DiscreteTdNetwork::DiscreteTdNetwork(const QuestionNetwork& net, double alpha, double lambda)
    : net_(net),
      alpha_(alpha),
      lambda_(lambda),
      nodes_(net.node_count()),
      features_(net.feature_count()),
      actions_(net.activation_count()),
      cols_(nodes_ + features_ + actions_),
      w_(nodes_ * cols_, 0.0),
      y_(nodes_, 0.0) {}

void DiscreteTdNetwork::step(std::size_t observation, std::optional<std::size_t> action) {
  if (observation >= features_) throw std::out_of_range("DiscreteTdNetwork: bad observation");
  if (action.has_value() != (actions_ > 0)) {
    throw std::invalid_argument("DiscreteTdNetwork: action must be given iff controlled");
  }

  std::vector<double> x(cols_, 0.0);
  for (std::size_t j = 0; j < nodes_; ++j) x[j] = y_[j];
  x[nodes_ + observation] = 1.0;
  if (action) x[nodes_ + features_ + *action] = 1.0;

  std::vector<double> y(nodes_, 0.0);
  for (std::size_t i = 0; i < nodes_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += w_[i * cols_ + j] * x[j];
    y[i] = s;
  }

  std::vector<Trace> kept;
  for (Trace& tr : traces_) {
    const auto age = static_cast<std::size_t>(t_ - tr.birth);
    // Walk up the parent links by hand.
    std::size_t from = tr.node;
    for (std::size_t k = 1; k < age; ++k) from = std::get<NodePred>(net_.node(from).parent).node;
    const QuestionNode& link = net_.node(from);
    if (link.condition && *link.condition != *action) continue;  // action mismatch kills

    const double p = y_[from];
    double z;
    bool done;
    if (const auto* f = std::get_if<FeatureObs>(&link.parent)) {
      z = f->feature == observation ? 1.0 : 0.0;
      done = true;
    } else {
      z = y[std::get<NodePred>(link.parent).node];
      done = false;
    }
    const double scale = alpha_ * (z - p) * 1.0 * std::pow(lambda_, static_cast<double>(age - 1));
    for (std::size_t j = 0; j < cols_; ++j) w_[tr.node * cols_ + j] += scale * tr.x[j];
    if (!done) kept.push_back(std::move(tr));
  }
  for (std::size_t i = 0; i < nodes_; ++i) kept.push_back(Trace{i, t_, x});
  traces_ = std::move(kept);
  y_ = std::move(y);
  ++t_;
}

}  // namespace ctdnet::validation
