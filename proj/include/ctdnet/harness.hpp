#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctdnet/basis.hpp"
#include "ctdnet/evaluation.hpp"
#include "ctdnet/systems.hpp"

namespace ctdnet {

/// Everything needed to reproduce a learning-curve experiment. Serialized as
/// flat JSON with these field names.
struct ExperimentConfig {
  std::string system = "square";
  std::size_t n = 4;         // observation features per dimension
  std::size_t m = 4;         // action activations per dimension
  double sigma_phi = 0.3;
  double sigma_psi = 0.1;
  std::size_t chain_depth = 5;
  double alpha = 0.01;
  double lambda = 1.0;
  std::size_t steps = 10000;
  std::size_t runs = 30;
  std::uint64_t base_seed = 1;
  std::size_t window = 100;
  double walk_std = 0.1;
  double noise_std = 0.05;
  std::int64_t initial_phase = 0;
  bool normalize_eval_weights = true;
  /// Sliding (overlapping) windows instead of non-overlapping blocks.
  bool sliding_window = false;

  /// Throws ConfigError (or UnknownKeyError for the system key) on invalid
  /// values.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parse flat JSON. Missing fields keep their defaults; unknown fields,
/// wrong types and invalid values throw ConfigError.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

struct RunCurve {
  std::vector<double> step_rmse;  // kept only if requested
  std::vector<double> windows;
};

struct LearningCurve {
  std::size_t window = 0;
  std::vector<std::size_t> t_end;  // one past the last step of each window
  std::vector<RunCurve> runs;
  std::vector<double> mean;  // cross-run arithmetic mean per window point
  std::vector<double> se;    // cross-run standard error per window point

  std::size_t points() const noexcept { return t_end.size(); }
};

struct RunOptions {
  /// Worker threads; runs are independent and results do not depend on it.
  std::size_t jobs = 1;
  bool keep_step_rmse = false;
};

/// Per-step evaluation of one run: the one-step feature prediction made from
/// the predictions held before the new observation arrives, against the
/// observed feature values. Throws DivergenceError (message carries the run).
RunCurve run_single(const ExperimentConfig& config, std::size_t run, bool keep_step_rmse);

/// All runs of `config` (run r seeded by base_seed + r), windowed and
/// aggregated.
LearningCurve run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Mean of each window of per-step values: non-overlapping blocks, or every
/// full sliding window.
std::vector<double> window_means(std::span<const double> values, std::size_t window, bool sliding);
std::vector<std::size_t> window_ends(std::size_t steps, std::size_t window, bool sliding);

struct NoiseFloor {
  double floor = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo estimate of the irreducible one-step RMSE of a wave system:
/// sqrt of the mean, over features and cycle phases, of Var[phi_f(clean + e)]
/// with e ~ N(0, noise_std^2). The square wave's cycle is its 10 phases; the
/// sine wave uses t = 0..125 (about ten periods). `samples` draws per phase.
/// Throws ConfigError for systems without a fixed clean trajectory.
NoiseFloor noise_floor(SystemKind kind, const RbfGrid& phi, std::size_t samples,
                       std::uint64_t seed, double noise_std = 0.05);

struct Preset {
  std::string key;
  ExperimentConfig config;
  /// Depths to sweep; empty means a single run at config.chain_depth.
  std::vector<std::size_t> depths;
};

/// fig5 .. fig9. Throws UnknownKeyError.
Preset figure_preset(std::string_view key);
std::vector<std::string> figure_keys();

}  // namespace ctdnet
