#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctdnet/answer_net.hpp"
#include "ctdnet/basis.hpp"
#include "ctdnet/question_net.hpp"

namespace ctdnet {

struct LearnerParams {
  double alpha = 0.01;
  double lambda = 1.0;
  /// Traces whose accumulated condition falls below this are dropped early.
  /// 0 keeps every trace for its full lifetime.
  double prune_threshold = 0.0;
  /// Fill StepDiagnostics::updates with one record per trace update.
  bool record_updates = false;
};

/// One trace update, as applied: W[node] += scale * x_birth.
struct TraceUpdate {
  std::size_t node;
  std::int64_t birth;
  std::size_t age;
  double target;     // z
  double prior;      // p
  double condition;  // accumulated condition after this step's factor (c_k)
  double scale;      // alpha * (z - p) * c_k * lambda^(age - 1)
};

struct StepDiagnostics {
  std::int64_t step = 0;
  /// Live traces after this step's spawn.
  std::size_t trace_count = 0;
  double max_abs_weight = 0.0;
  /// Next-step feature predictions from y_t, weighting controlled children by
  /// the activations of the action just taken. Empty for networks that do not
  /// give every feature a depth-1 child.
  std::vector<double> one_step_predictions;
  std::vector<TraceUpdate> updates;
};

struct StepResult {
  PredictionVector predictions;  // y_t
  StepDiagnostics diagnostics;
};

struct TraceView {
  std::size_t node;
  std::int64_t birth;
  double accumulated_condition;
  std::span<const double> stored_input;
};

/// Online TD(lambda) learner for a continuous TD network with a linear answer
/// network and single-target chain question network.
///
/// Each step takes the action that produced the new observation (absent for
/// uncontrolled networks), builds x_t = [y_{t-1}, phi(o_t), psi(a)], predicts
/// y_t = W x_t, applies every live trace's update, and spawns one new trace
/// per node. A trace (i, k) at age t - k targets y_t[p^age(i)], or the
/// observed feature once p^age(i) is an observation; its accumulated action
/// condition is multiplied each step by the activation of its chain's
/// condition at the current action. A trace lives exactly depth(i) updates.
///
/// Weights and the initial prediction vector start at zero.
class Learner {
 public:
  /// Learner driven with pre-encoded feature/activation vectors only.
  Learner(QuestionNetwork net, LearnerParams params);
  /// Learner that encodes raw observations/actions with the given grids.
  /// `activations` must be present iff the network is controlled, and grid
  /// sizes must match the network. Throws std::invalid_argument otherwise.
  Learner(QuestionNetwork net, RbfGrid features, std::optional<RbfGrid> activations,
          LearnerParams params);

  /// One learning step from raw values. `action` must be empty iff the
  /// network is uncontrolled. Throws DivergenceError on non-finite values.
  StepResult step(std::span<const double> action, std::span<const double> observation);

  /// One learning step from feature values phi(o_t) and activation values
  /// psi(a) (empty when uncontrolled).
  StepResult step_encoded(std::span<const double> features, std::span<const double> activations);

  /// Zero weights and predictions, drop all traces, t = 0.
  void reset();

  /// Resume from a checkpoint. Traces are not part of a checkpoint, so the
  /// learner restarts with none.
  void restore(WeightMatrix weights, PredictionVector y_prev, std::int64_t t);

  const QuestionNetwork& network() const noexcept { return net_; }
  const LearnerParams& params() const noexcept { return params_; }
  const InputLayout& layout() const noexcept { return layout_; }
  const WeightMatrix& weights() const noexcept { return w_; }
  const PredictionVector& previous_predictions() const noexcept { return y_prev_; }
  /// Input of the most recent step (x_{t-1}); zeros before the first step.
  const InputVector& last_input() const noexcept { return x_; }
  std::int64_t time() const noexcept { return t_; }
  std::size_t trace_count() const noexcept;
  std::vector<TraceView> traces() const;

  const std::optional<RbfGrid>& feature_grid() const noexcept { return phi_; }
  const std::optional<RbfGrid>& activation_grid() const noexcept { return psi_; }

 private:
  // All traces born at one step share the stored input.
  struct Cohort {
    std::int64_t birth = -1;
    std::vector<double> input;
    std::vector<double> condition;
    std::vector<std::uint8_t> live;
    std::size_t live_count = 0;
  };
  // p^k(i) flattened: feature index if `feature`, else node index.
  struct Hop {
    bool feature;
    std::size_t index;
  };

  void init();
  const Hop& hop(std::size_t node, std::size_t k) const { return hops_[node * hop_stride_ + k]; }

  QuestionNetwork net_;
  LearnerParams params_;
  std::optional<RbfGrid> phi_;
  std::optional<RbfGrid> psi_;
  InputLayout layout_;

  WeightMatrix w_;
  PredictionVector y_prev_;
  InputVector x_;
  std::int64_t t_ = 0;
  std::vector<Cohort> cohorts_;  // ring indexed by birth % chain_depth

  std::vector<Hop> hops_;
  std::size_t hop_stride_ = 0;
  bool diagnose_features_ = false;
  std::vector<double> lambda_pow_;
  std::vector<double> feature_buf_;
  std::vector<double> activation_buf_;
};

}  // namespace ctdnet
