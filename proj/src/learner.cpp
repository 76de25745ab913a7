#include "ctdnet/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctdnet/error.hpp"
#include "ctdnet/evaluation.hpp"

namespace ctdnet {

namespace {

InputLayout layout_for(const QuestionNetwork& net) {
  return InputLayout{net.node_count(), net.feature_count(), net.activation_count()};
}

}  // namespace

Learner::Learner(QuestionNetwork net, LearnerParams params)
    : net_(std::move(net)), params_(params), layout_(layout_for(net_)), x_(layout_) {
  init();
}

Learner::Learner(QuestionNetwork net, RbfGrid features, std::optional<RbfGrid> activations,
                 LearnerParams params)
    : net_(std::move(net)),
      params_(params),
      phi_(std::move(features)),
      psi_(std::move(activations)),
      layout_(layout_for(net_)),
      x_(layout_) {
  if (phi_->size() != net_.feature_count()) {
    throw std::invalid_argument("Learner: feature grid size does not match the network");
  }
  if (net_.controlled() != psi_.has_value()) {
    throw std::invalid_argument("Learner: activation grid must be present iff controlled");
  }
  if (psi_ && psi_->size() != net_.activation_count()) {
    throw std::invalid_argument("Learner: activation grid size does not match the network");
  }
  feature_buf_.resize(phi_->size());
  if (psi_) activation_buf_.resize(psi_->size());
  init();
}

void Learner::init() {
  if (net_.node_count() == 0) throw std::invalid_argument("Learner: empty question network");
  if (!(params_.alpha > 0.0) || !std::isfinite(params_.alpha)) {
    throw std::invalid_argument("Learner: alpha must be positive");
  }
  if (!(params_.lambda >= 0.0 && params_.lambda <= 1.0)) {
    throw std::invalid_argument("Learner: lambda must lie in [0, 1]");
  }
  if (!(params_.prune_threshold >= 0.0 && params_.prune_threshold <= 1.0)) {
    throw std::invalid_argument("Learner: prune_threshold must lie in [0, 1]");
  }

  const std::size_t depth = net_.chain_depth();
  hop_stride_ = depth + 1;
  hops_.assign(net_.node_count() * hop_stride_, Hop{false, 0});
  for (std::size_t i = 0; i < net_.node_count(); ++i) {
    for (std::size_t k = 0; k <= net_.depth(i); ++k) {
      const Target t = net_.kth_parent(i, k);
      if (const auto* f = std::get_if<FeatureObs>(&t)) {
        hops_[i * hop_stride_ + k] = Hop{true, f->feature};
      } else {
        hops_[i * hop_stride_ + k] = Hop{false, std::get<NodePred>(t).node};
      }
    }
  }
  diagnose_features_ = true;
  for (std::size_t f = 0; f < net_.feature_count(); ++f) {
    const std::size_t n = net_.children_of_feature(f).size();
    if (net_.controlled() ? n == 0 : n != 1) diagnose_features_ = false;
  }

  // lambda^(age - 1), with 0^0 = 1.
  lambda_pow_.resize(depth + 1);
  for (std::size_t a = 0; a <= depth; ++a) {
    lambda_pow_[a] = std::pow(params_.lambda, static_cast<double>(a));
  }

  reset();
}

void Learner::reset() {
  w_ = WeightMatrix(layout_.nodes, layout_.size());
  y_prev_.assign(layout_.nodes, 0.0);
  x_ = InputVector(layout_);
  t_ = 0;
  cohorts_.assign(net_.chain_depth(), Cohort{});
  for (auto& c : cohorts_) {
    c.input.resize(layout_.size());
    c.condition.resize(layout_.nodes);
    c.live.resize(layout_.nodes);
  }
}

void Learner::restore(WeightMatrix weights, PredictionVector y_prev, std::int64_t t) {
  if (weights.rows() != layout_.nodes || weights.cols() != layout_.size()) {
    throw std::invalid_argument("Learner::restore: weight shape does not match the network");
  }
  if (y_prev.size() != layout_.nodes) {
    throw std::invalid_argument("Learner::restore: prediction length does not match the network");
  }
  if (t < 0) throw std::invalid_argument("Learner::restore: negative time step");
  reset();
  w_ = std::move(weights);
  y_prev_ = std::move(y_prev);
  t_ = t;
}

std::size_t Learner::trace_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : cohorts_) n += c.live_count;
  return n;
}

std::vector<TraceView> Learner::traces() const {
  std::vector<TraceView> out;
  const auto depth = static_cast<std::int64_t>(cohorts_.size());
  for (std::int64_t birth = t_ - depth; birth < t_; ++birth) {
    if (birth < 0) continue;
    const Cohort& c = cohorts_[static_cast<std::size_t>(birth % depth)];
    if (c.birth != birth) continue;
    for (std::size_t i = 0; i < layout_.nodes; ++i) {
      if (c.live[i]) out.push_back(TraceView{i, birth, c.condition[i], c.input});
    }
  }
  return out;
}

StepResult Learner::step(std::span<const double> action, std::span<const double> observation) {
  if (!phi_) throw std::logic_error("Learner::step: no feature grid; use step_encoded");
  phi_->evaluate(observation, feature_buf_);
  if (psi_) {
    if (action.empty()) throw std::invalid_argument("Learner::step: controlled network needs an action");
    psi_->evaluate(action, activation_buf_);
  } else if (!action.empty()) {
    throw std::invalid_argument("Learner::step: uncontrolled network takes no action");
  }
  return step_encoded(feature_buf_, activation_buf_);
}

StepResult Learner::step_encoded(std::span<const double> features,
                                 std::span<const double> activations) {
  const bool controlled = net_.controlled();
  if (controlled && activations.empty()) {
    throw std::invalid_argument("Learner::step_encoded: controlled network needs activations");
  }

  assemble_input_into(x_, y_prev_, features, activations);

  StepResult result;
  result.diagnostics.step = t_;
  PredictionVector& y = result.predictions;
  y.resize(layout_.nodes);
  try {
    predict(w_, x_.values(), y);
  } catch (const NonFiniteError& e) {
    throw DivergenceError(t_, e.index(),
                          "divergence at step " + std::to_string(t_) + ": " + e.what());
  }

  const auto depth = static_cast<std::int64_t>(cohorts_.size());
  for (std::int64_t birth = t_ - depth; birth < t_; ++birth) {
    if (birth < 0) continue;
    Cohort& c = cohorts_[static_cast<std::size_t>(birth % depth)];
    if (c.birth != birth || c.live_count == 0) continue;
    const auto age = static_cast<std::size_t>(t_ - birth);
    const double lambda_factor = lambda_pow_[age - 1];

    for (std::size_t i = 0; i < layout_.nodes; ++i) {
      if (!c.live[i]) continue;
      const Hop& to = hop(i, age);
      const Hop& from = hop(i, age - 1);  // always a node: age <= depth(i)
      const double z = to.feature ? features[to.index] : y[to.index];
      const double p = y_prev_[from.index];
      double ck = c.condition[i];
      if (controlled) {
        const auto& cond = net_.node(from.index).condition;
        if (cond) ck *= activations[*cond];
      }
      const double scale = params_.alpha * (z - p) * ck * lambda_factor;
      try {
        apply_row_update(w_, i, scale, c.input);
      } catch (const NonFiniteError& e) {
        throw DivergenceError(t_, i, "divergence at step " + std::to_string(t_) + ": " + e.what());
      }
      if (params_.record_updates) {
        result.diagnostics.updates.push_back(TraceUpdate{i, birth, age, z, p, ck, scale});
      }
      if (to.feature || (params_.prune_threshold > 0.0 && ck < params_.prune_threshold)) {
        c.live[i] = 0;
        --c.live_count;
      } else {
        c.condition[i] = ck;
      }
    }
  }

  // Spawn: the slot for birth t_ held birth t_ - depth, which has expired.
  Cohort& fresh = cohorts_[static_cast<std::size_t>(t_ % depth)];
  fresh.birth = t_;
  std::copy(x_.values().begin(), x_.values().end(), fresh.input.begin());
  std::fill(fresh.condition.begin(), fresh.condition.end(), 1.0);
  std::fill(fresh.live.begin(), fresh.live.end(), std::uint8_t{1});
  fresh.live_count = layout_.nodes;

  y_prev_ = y;
  ++t_;

  result.diagnostics.trace_count = trace_count();
  result.diagnostics.max_abs_weight = w_.max_abs();
  if (diagnose_features_) {
    try {
      result.diagnostics.one_step_predictions = one_step_feature_prediction(
          y, net_, controlled ? activations : std::span<const double>{}, /*normalize=*/true);
    } catch (const std::domain_error&) {
      // No child's condition is active for this action.
    }
  }
  return result;
}

}  // namespace ctdnet
