#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ctdnet/error.hpp"
#include "ctdnet/harness.hpp"
#include "ctdnet/learner.hpp"

using namespace ctdnet;

namespace {

// 10^6 draws per phase, seed 1, square wave, n = 4, sigma_phi = 0.3, noise 0.05.
constexpr double kSquareFloor = 0.038402723984939505;
// The same quantity from the Gaussian integrals in closed form.
constexpr double kSquareFloorExact = 0.038410192118795344;

RbfGrid unit_features() { return make_grid(BoxBounds::uniform(1, 0.0, 1.0), 4, 0.3); }

}  // namespace

TEST_CASE("config json round trip and defaults") {
  const ExperimentConfig def = config_from_json("{}");
  CHECK(def == ExperimentConfig{});

  ExperimentConfig c;
  c.system = "mcar-po";
  c.chain_depth = 3;
  c.alpha = 0.0025;
  c.base_seed = 18446744073709551615ull;
  c.sliding_window = true;
  c.initial_phase = -3;
  CHECK(config_from_json(config_to_json(c)) == c);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1]"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"alpah": 0.1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"alpha": "big"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"steps": -4})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"steps": 1.5})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"steps": 50, "window": 100})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"lambda": 1.5})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"system": "pendulum"})"), UnknownKeyError);
}

TEST_CASE("windows") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7};
  CHECK(window_means(v, 3, false) == std::vector<double>{2, 5});
  CHECK(window_means(v, 3, true) == std::vector<double>{2, 3, 4, 5, 6});
  CHECK(window_ends(7, 3, false) == std::vector<std::size_t>{3, 6});
  CHECK(window_ends(7, 3, true) == std::vector<std::size_t>{3, 4, 5, 6, 7});
  CHECK(window_means(v, 8, false).empty());
}

TEST_CASE("one window when steps equal the window") {
  ExperimentConfig c;
  c.steps = 100;
  c.runs = 3;
  const LearningCurve curve = run_experiment(c);
  CHECK(curve.points() == 1);
  CHECK(curve.t_end[0] == 100);
  for (const auto& r : curve.runs) CHECK(r.windows.size() == 1);
}

TEST_CASE("windowed points are block means of the per-step values") {
  ExperimentConfig c;
  c.steps = 1000;
  c.runs = 2;
  const LearningCurve curve = run_experiment(c, RunOptions{2, true});
  for (const auto& r : curve.runs) {
    REQUIRE(r.step_rmse.size() == 1000);
    REQUIRE(r.windows.size() == 10);
    for (std::size_t w = 0; w < 10; ++w) {
      const double s = std::accumulate(r.step_rmse.begin() + w * 100, r.step_rmse.begin() + (w + 1) * 100, 0.0);
      CHECK(r.windows[w] == doctest::Approx(s / 100.0).epsilon(1e-14));
    }
    for (double v : r.step_rmse) CHECK(v >= 0.0);
  }
}

TEST_CASE("noise-free square wave is learned almost exactly") {
  ExperimentConfig c;
  c.noise_std = 0.0;
  c.runs = 2;
  const LearningCurve curve = run_experiment(c);
  CHECK(curve.mean.back() < 0.01);
  CHECK(curve.se.back() == 0.0);  // nothing random is left
}

TEST_CASE("runs are determined by their seed") {
  ExperimentConfig a;
  a.steps = 500;
  a.base_seed = 5;
  ExperimentConfig b = a;
  b.base_seed = 6;
  const RunCurve ra = run_single(a, 1, true);
  const RunCurve rb = run_single(b, 0, true);
  CHECK(ra.step_rmse == rb.step_rmse);
  CHECK(ra.windows == rb.windows);
}

TEST_CASE("thread count does not change results") {
  ExperimentConfig c;
  c.system = "sine-ctl";
  c.chain_depth = 2;
  c.steps = 800;
  c.runs = 6;
  const LearningCurve serial = run_experiment(c, RunOptions{1, false});
  const LearningCurve parallel = run_experiment(c, RunOptions{4, false});
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.se == parallel.se);
}

TEST_CASE("evaluation happens before learning") {
  // Honest: y_{t-1} predicts phi(o_t). Leaky: the weights after learning
  // from o_t applied to x_{t-1}. Leaking the target must look better.
  ExperimentConfig c;
  c.steps = 3000;
  const RunCurve harness = run_single(c, 0, true);

  const RbfGrid phi = unit_features();
  Learner learner(build_chain_network(4, 0, 5), phi, std::nullopt, LearnerParams{c.alpha, c.lambda});
  auto sys = make_system(SystemKind::Square, SystemOptions{c.noise_std, 0}, derive_seed(c.base_seed, 0));
  double honest = 0.0, leaky = 0.0;
  std::vector<double> actual(4);
  for (std::size_t t = 0; t < c.steps; ++t) {
    const auto obs = sys->step({});
    phi.evaluate(obs, actual);
    const auto before = one_step_feature_prediction(learner.previous_predictions(), learner.network(), {});
    const double e = rmse_step(before, actual);
    CHECK(e == harness.step_rmse[t]);
    honest += e;
    const std::vector<double> x_prev(learner.last_input().values().begin(), learner.last_input().values().end());
    learner.step({}, obs);
    const auto y_leak = predict(learner.weights(), x_prev);
    leaky += rmse_step(one_step_feature_prediction(y_leak, learner.network(), {}), actual);
  }
  CHECK(leaky < honest);
}

TEST_CASE("noise floor") {
  const RbfGrid phi = unit_features();
  CHECK(noise_floor(SystemKind::Square, phi, 1000, 1, 0.0).floor == 0.0);

  const NoiseFloor ref = noise_floor(SystemKind::Square, phi, 1000000, 1, 0.05);
  CHECK(ref.floor == doctest::Approx(kSquareFloor).epsilon(1e-12));
  CHECK(ref.standard_error > 0.0);
  CHECK(std::abs(ref.floor - kSquareFloorExact) <= 3.0 * ref.standard_error);

  const NoiseFloor other = noise_floor(SystemKind::Square, phi, 1000000, 2, 0.05);
  CHECK(std::abs(other.floor - ref.floor) <= 3.0 * std::hypot(ref.standard_error, other.standard_error));

  // sine: sqrt of the mean closed-form variance over t = 0..125
  const NoiseFloor sine = noise_floor(SystemKind::Sine, phi, 100000, 1, 0.05);
  CHECK(std::abs(sine.floor - 0.04006923563046258) <= 3.0 * sine.standard_error);

  CHECK_THROWS_AS(noise_floor(SystemKind::MountainCarPO, phi, 1000, 1), ConfigError);
  CHECK_THROWS_AS(noise_floor(SystemKind::SquareCtl, phi, 1000, 1), ConfigError);
}

TEST_CASE("figure presets") {
  const Preset f5 = figure_preset("fig5");
  CHECK(f5.config.system == "square");
  CHECK(f5.config.n == 4);
  CHECK(f5.config.sigma_phi == 0.3);
  CHECK(f5.config.chain_depth == 5);
  CHECK(f5.config.alpha == 0.01);
  CHECK(f5.config.lambda == 1.0);
  CHECK(f5.config.runs == 30);
  CHECK(f5.depths.empty());

  CHECK(figure_preset("fig6").depths == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7});
  CHECK(figure_preset("fig7").config.system == "square-ctl");
  CHECK(figure_preset("fig7").config.sigma_psi == 0.1);
  CHECK(figure_preset("fig8").config.system == "sine-ctl");
  CHECK(figure_preset("fig9").config.steps == 20000);
  CHECK_THROWS_AS(figure_preset("fig4"), UnknownKeyError);
  for (const auto& k : figure_keys()) CHECK_NOTHROW(figure_preset(k).config.validate());
}
