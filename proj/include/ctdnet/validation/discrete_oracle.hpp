#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ctdnet/question_net.hpp"

namespace ctdnet::validation {

/// Plain discrete TD(lambda) network with indicator features and actions,
/// coded directly from the trace-based update loop: a trace is dropped as
/// soon as the action taken does not match the condition of the link it is
/// crossing, and is otherwise updated with weight 1.
///
/// Shares nothing with Learner beyond the question network topology.
class DiscreteTdNetwork {
 public:
  DiscreteTdNetwork(const QuestionNetwork& net, double alpha, double lambda);

  /// Observe symbol `observation` after taking `action` (absent for
  /// uncontrolled networks).
  void step(std::size_t observation, std::optional<std::size_t> action);

  std::size_t rows() const noexcept { return nodes_; }
  std::size_t cols() const noexcept { return cols_; }
  /// Row-major rows() x cols().
  const std::vector<double>& weights() const noexcept { return w_; }
  const std::vector<double>& predictions() const noexcept { return y_; }
  std::size_t live_traces() const noexcept { return traces_.size(); }

 private:
  struct Trace {
    std::size_t node;
    std::int64_t birth;
    std::vector<double> x;
  };

  const QuestionNetwork& net_;
  double alpha_;
  double lambda_;
  std::size_t nodes_;
  std::size_t features_;
  std::size_t actions_;
  std::size_t cols_;
  std::vector<double> w_;
  std::vector<double> y_;
  std::vector<Trace> traces_;
  std::int64_t t_ = 0;
};

}  // namespace ctdnet::validation
