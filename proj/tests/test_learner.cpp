#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "ctdnet/error.hpp"
#include "ctdnet/evaluation.hpp"
#include "ctdnet/learner.hpp"
#include "ctdnet/systems.hpp"

using namespace ctdnet;

namespace {

Learner controlled_learner(LearnerParams params = {}, std::size_t depth = 5) {
  return Learner(build_chain_network(4, 4, depth), make_grid(BoxBounds::uniform(1, 0, 1), 4, 0.3),
                 make_grid(BoxBounds::uniform(1, 0, 1), 4, 0.1), params);
}

}  // namespace

TEST_CASE("reset state") {
  Learner l = controlled_learner();
  CHECK(l.weights().rows() == 80);
  CHECK(l.weights().cols() == 88);
  CHECK(l.weights().max_abs() == 0.0);
  CHECK(l.trace_count() == 0);
  CHECK(l.time() == 0);

  const auto r = l.step(std::vector<double>{0.4}, std::vector<double>{0.7});
  for (double v : r.predictions) CHECK(v == 0.0);
  CHECK(l.trace_count() == 80);
  for (const auto& t : l.traces()) CHECK(t.accumulated_condition == 1.0);

  l.reset();
  CHECK(l.trace_count() == 0);
  CHECK(l.time() == 0);
}

TEST_CASE("depth-1 chain reduces to a one-step update") {
  const double alpha = 0.1;
  Learner l(build_chain_network(1, 0, 1), LearnerParams{alpha, 0.3});
  const double phi0 = 0.8, phi1 = 0.25;
  l.step_encoded(std::vector<double>{phi0}, {});
  CHECK(l.weights().max_abs() == 0.0);
  l.step_encoded(std::vector<double>{phi1}, {});
  // W += alpha (phi1 - y_0) x_0 with y_0 = 0 and x_0 = [0, phi0]
  CHECK(l.weights()(0, 0) == 0.0);
  CHECK(l.weights()(0, 1) == doctest::Approx(alpha * phi1 * phi0).epsilon(1e-15));

  const double w = l.weights()(0, 1);
  const double y1 = 0.0;  // predicted before the first update
  const double phi2 = 0.6;
  const auto r = l.step_encoded(std::vector<double>{phi2}, {});
  CHECK(r.predictions[0] == doctest::Approx(w * phi2).epsilon(1e-15));
  // trace born at step 1 has prior y_1 and stored input [y_0, phi1] = [0, phi1]
  CHECK(l.weights()(0, 1) == doctest::Approx(w + alpha * (phi2 - y1) * phi1).epsilon(1e-15));
}

TEST_CASE("depth-2 traces get two updates, the second toward the feature") {
  LearnerParams p;
  p.alpha = 0.05;
  p.record_updates = true;
  Learner l(build_chain_network(1, 0, 2), p);
  std::map<std::int64_t, int> seen;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const double phi = u(rng);
    const auto r = l.step_encoded(std::vector<double>{phi}, {});
    for (const auto& up : r.diagnostics.updates) {
      if (up.node != 1) continue;
      ++seen[up.birth];
      if (up.age == 2) CHECK(up.target == phi);
      if (up.age == 1) CHECK(up.target == r.predictions[0]);
    }
  }
  for (std::int64_t b = 0; b < 28; ++b) CHECK(seen[b] == 2);
}

TEST_CASE("chain at its activation center keeps condition 1") {
  LearnerParams p;
  p.record_updates = true;
  Learner l = controlled_learner(p);
  const std::vector<double> action{2.0 / 3.0};  // center of activation 2
  for (int t = 0; t < 12; ++t) {
    const auto r = l.step(action, std::vector<double>{t % 2 ? 0.1 : 0.9});
    for (const auto& up : r.diagnostics.updates) {
      if (*l.network().node(up.node).condition == 2) CHECK(up.condition == 1.0);
      else CHECK(up.condition < 1.0);
    }
  }
  for (const auto& tv : l.traces()) {
    if (*l.network().node(tv.node).condition == 2) CHECK(tv.accumulated_condition == 1.0);
  }
}

TEST_CASE("update scale carries lambda^(age-1)") {
  LearnerParams p;
  p.alpha = 0.02;
  p.lambda = 0.5;
  p.record_updates = true;
  Learner l(build_chain_network(2, 0, 4), p);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checked = 0;
  for (int t = 0; t < 40; ++t) {
    const auto r = l.step_encoded(std::vector<double>{u(rng), u(rng)}, {});
    for (const auto& up : r.diagnostics.updates) {
      const double want = p.alpha * (up.target - up.prior) * up.condition *
                          std::pow(0.5, static_cast<double>(up.age - 1));
      CHECK(up.scale == doctest::Approx(want).epsilon(1e-15));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("diagnostics carry the one-step predictions") {
  Learner l = controlled_learner();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> a{u(rng)};
    const auto r = l.step(a, std::vector<double>{u(rng)});
    const auto act = l.activation_grid()->evaluate(a);
    const auto want = one_step_feature_prediction(r.predictions, l.network(), act);
    CHECK(r.diagnostics.one_step_predictions == want);
    CHECK(r.diagnostics.max_abs_weight == l.weights().max_abs());
    CHECK(r.diagnostics.trace_count == l.trace_count());
  }
}

TEST_CASE("pruning drops faint traces") {
  LearnerParams p;
  p.prune_threshold = 0.5;
  Learner pruned = controlled_learner(p);
  Learner full = controlled_learner();
  for (int t = 0; t < 10; ++t) {
    pruned.step(std::vector<double>{0.0}, std::vector<double>{0.5});
    full.step(std::vector<double>{0.0}, std::vector<double>{0.5});
  }
  CHECK(pruned.trace_count() < full.trace_count());
  for (const auto& tv : pruned.traces()) CHECK(tv.accumulated_condition >= 0.5);
}

TEST_CASE("divergence is reported with its step") {
  Learner l(build_chain_network(4, 0, 5), make_grid(BoxBounds::uniform(1, 0, 1), 4, 0.3),
            std::nullopt, LearnerParams{50.0, 1.0});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool diverged = false;
  for (int t = 0; t < 1000 && !diverged; ++t) {
    try {
      l.step({}, std::vector<double>{u(rng)});
    } catch (const DivergenceError& e) {
      diverged = true;
      CHECK(e.step() == t);
      CHECK(e.node() < 20);
    }
  }
  CHECK(diverged);
}

TEST_CASE("restore resumes without traces") {
  Learner l = controlled_learner();
  for (int t = 0; t < 7; ++t) l.step(std::vector<double>{0.3}, std::vector<double>{0.6});
  const WeightMatrix w = l.weights();
  const PredictionVector y = l.previous_predictions();
  Learner other = controlled_learner();
  other.restore(w, y, 7);
  CHECK(other.weights() == w);
  CHECK(other.previous_predictions() == y);
  CHECK(other.time() == 7);
  CHECK(other.trace_count() == 0);
  const auto a = other.step(std::vector<double>{0.3}, std::vector<double>{0.6});
  const auto b = l.step(std::vector<double>{0.3}, std::vector<double>{0.6});
  CHECK(a.predictions == b.predictions);
  CHECK_THROWS_AS(other.restore(WeightMatrix(3, 3), y, 0), std::invalid_argument);
}

TEST_CASE("construction and step arguments are checked") {
  const auto net = build_chain_network(4, 4, 2);
  const RbfGrid phi = make_grid(BoxBounds::uniform(1, 0, 1), 4, 0.3);
  const RbfGrid psi3 = make_grid(BoxBounds::uniform(1, 0, 1), 3, 0.1);
  CHECK_THROWS_AS(Learner(net, phi, std::nullopt, {}), std::invalid_argument);
  CHECK_THROWS_AS(Learner(net, phi, psi3, {}), std::invalid_argument);
  CHECK_THROWS_AS(Learner(net, LearnerParams{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Learner(net, LearnerParams{0.1, 1.5}), std::invalid_argument);
  Learner l = controlled_learner();
  CHECK_THROWS_AS(l.step({}, std::vector<double>{0.5}), std::invalid_argument);
  Learner enc(net, LearnerParams{});
  CHECK_THROWS_AS(enc.step(std::vector<double>{0.5}, std::vector<double>{0.5}), std::logic_error);
}
