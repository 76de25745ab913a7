#include "ctdnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <thread>

#include "json.hpp"

#include "ctdnet/error.hpp"
#include "ctdnet/learner.hpp"
#include "ctdnet/question_net.hpp"

namespace ctdnet {

using json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  const SystemKind kind = parse_system_key(system);
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(n >= 1, "n must be >= 1");
  require(m >= 1 || !system_spec(kind).controlled(), "m must be >= 1 for controlled systems");
  require(sigma_phi > 0.0 && std::isfinite(sigma_phi), "sigma_phi must be positive");
  require(sigma_psi > 0.0 && std::isfinite(sigma_psi), "sigma_psi must be positive");
  require(chain_depth >= 1, "chain_depth must be >= 1");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(steps >= 1, "steps must be >= 1");
  require(runs >= 1, "runs must be >= 1");
  require(window >= 1, "window must be >= 1");
  require(window <= steps, "window must not exceed steps");
  require(walk_std >= 0.0 && std::isfinite(walk_std), "walk_std must be >= 0");
  require(noise_std >= 0.0 && std::isfinite(noise_std), "noise_std must be >= 0");
}

namespace {

template <typename T>
void read_field(const json& j, const char* name, T& out) {
  if (!j.contains(name)) return;
  try {
    out = j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + name + "': " + e.what());
  }
}

void read_count(const json& j, const char* name, std::size_t& out) {
  if (!j.contains(name)) return;
  const auto& v = j.at(name);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string("config field '") + name + "' must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  static const char* const kFields[] = {
      "system", "n",     "m",        "sigma_phi", "sigma_psi", "chain_depth",
      "alpha",  "lambda", "steps",   "runs",      "base_seed", "window",
      "walk_std", "noise_std", "initial_phase", "normalize_eval_weights", "sliding_window"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* f : kFields) known = known || item.key() == f;
    if (!known) throw ConfigError("unknown config field '" + item.key() + "'");
  }

  ExperimentConfig c;
  read_field(j, "system", c.system);
  read_count(j, "n", c.n);
  read_count(j, "m", c.m);
  read_field(j, "sigma_phi", c.sigma_phi);
  read_field(j, "sigma_psi", c.sigma_psi);
  read_count(j, "chain_depth", c.chain_depth);
  read_field(j, "alpha", c.alpha);
  read_field(j, "lambda", c.lambda);
  read_count(j, "steps", c.steps);
  read_count(j, "runs", c.runs);
  if (j.contains("base_seed")) {
    if (!j["base_seed"].is_number_integer()) throw ConfigError("config field 'base_seed' must be an integer");
    c.base_seed = j["base_seed"].get<std::uint64_t>();
  }
  read_count(j, "window", c.window);
  read_field(j, "walk_std", c.walk_std);
  read_field(j, "noise_std", c.noise_std);
  read_field(j, "initial_phase", c.initial_phase);
  read_field(j, "normalize_eval_weights", c.normalize_eval_weights);
  read_field(j, "sliding_window", c.sliding_window);
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["system"] = c.system;
  j["n"] = c.n;
  j["m"] = c.m;
  j["sigma_phi"] = c.sigma_phi;
  j["sigma_psi"] = c.sigma_psi;
  j["chain_depth"] = c.chain_depth;
  j["alpha"] = c.alpha;
  j["lambda"] = c.lambda;
  j["steps"] = c.steps;
  j["runs"] = c.runs;
  j["base_seed"] = c.base_seed;
  j["window"] = c.window;
  j["walk_std"] = c.walk_std;
  j["noise_std"] = c.noise_std;
  j["initial_phase"] = c.initial_phase;
  j["normalize_eval_weights"] = c.normalize_eval_weights;
  j["sliding_window"] = c.sliding_window;
  return j.dump(2) + "\n";
}

std::vector<double> window_means(std::span<const double> values, std::size_t window, bool sliding) {
  if (window == 0) throw std::invalid_argument("window_means: window must be positive");
  std::vector<double> out;
  if (values.size() < window) return out;
  const std::size_t stride = sliding ? 1 : window;
  for (std::size_t start = 0; start + window <= values.size(); start += stride) {
    double sum = 0.0;
    for (std::size_t k = start; k < start + window; ++k) sum += values[k];
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

std::vector<std::size_t> window_ends(std::size_t steps, std::size_t window, bool sliding) {
  std::vector<std::size_t> out;
  const std::size_t stride = sliding ? 1 : window;
  for (std::size_t start = 0; start + window <= steps; start += stride) out.push_back(start + window);
  return out;
}

RunCurve run_single(const ExperimentConfig& config, std::size_t run, bool keep_step_rmse) {
  const SystemKind kind = parse_system_key(config.system);
  const SystemSpec spec = system_spec(kind, config.noise_std);
  const std::uint64_t seed = config.base_seed + run;

  RbfGrid phi = make_grid(spec.obs_bounds, config.n, config.sigma_phi);
  std::optional<RbfGrid> psi;
  if (spec.controlled()) psi = make_grid(*spec.action_bounds, config.m, config.sigma_psi);
  QuestionNetwork net =
      build_chain_network(phi.size(), psi ? psi->size() : 0, config.chain_depth);
  Learner learner(net, phi, psi, LearnerParams{config.alpha, config.lambda});

  auto system = make_system(kind, SystemOptions{config.noise_std, config.initial_phase},
                            derive_seed(seed, 0));
  std::optional<RandomWalkPolicy> policy;
  if (spec.controlled()) policy.emplace(*spec.action_bounds, config.walk_std, derive_seed(seed, 1));

  std::vector<double> step_rmse(config.steps);
  std::vector<double> actual(phi.size());
  std::vector<double> activations(psi ? psi->size() : 0);
  std::vector<double> predicted(phi.size());
  std::vector<double> action;

  for (std::size_t t = 0; t < config.steps; ++t) {
    if (policy) {
      const auto a = policy->next();
      action.assign(a.begin(), a.end());
      psi->evaluate(action, activations);
    }
    const std::vector<double> obs = system->step(action);
    phi.evaluate(obs, actual);

    // Evaluate before the learner sees the observation.
    one_step_feature_prediction(learner.previous_predictions(), learner.network(), activations,
                                config.normalize_eval_weights, predicted);
    step_rmse[t] = rmse_step(predicted, actual);

    try {
      learner.step_encoded(actual, activations);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.step(), e.node(),
                            "run " + std::to_string(run) + " (seed " + std::to_string(seed) +
                                "): " + e.what());
    }
  }

  RunCurve curve;
  curve.windows = window_means(step_rmse, config.window, config.sliding_window);
  if (keep_step_rmse) curve.step_rmse = std::move(step_rmse);
  return curve;
}

LearningCurve run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  LearningCurve out;
  out.window = config.window;
  out.t_end = window_ends(config.steps, config.window, config.sliding_window);
  out.runs.resize(config.runs);

  std::vector<std::exception_ptr> errors(config.runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next.fetch_add(1); r < config.runs; r = next.fetch_add(1)) {
      try {
        out.runs[r] = run_single(config, r, options.keep_step_rmse);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, config.runs));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t points = out.t_end.size();
  const auto runs = static_cast<double>(config.runs);
  out.mean.assign(points, 0.0);
  out.se.assign(points, 0.0);
  for (std::size_t w = 0; w < points; ++w) {
    double sum = 0.0;
    for (const auto& run : out.runs) sum += run.windows[w];
    const double mean = sum / runs;
    double ss = 0.0;
    for (const auto& run : out.runs) ss += (run.windows[w] - mean) * (run.windows[w] - mean);
    out.mean[w] = mean;
    out.se[w] = config.runs > 1 ? std::sqrt(ss / (runs - 1.0)) / std::sqrt(runs) : 0.0;
  }
  return out;
}

NoiseFloor noise_floor(SystemKind kind, const RbfGrid& phi, std::size_t samples,
                       std::uint64_t seed, double noise_std) {
  if (samples < 2) throw ConfigError("noise_floor: need at least 2 samples per phase");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_floor: noise_std must be >= 0");
  if (phi.dim() != 1) throw ConfigError("noise_floor: wave systems have 1-D observations");
  std::vector<double> clean;
  switch (kind) {
    case SystemKind::Square:
      for (int p = 0; p < 10; ++p) clean.push_back(SquareWave::clean_value(p));
      break;
    case SystemKind::Sine:
      for (std::int64_t t = 0; t < 126; ++t) clean.push_back(SineWave::clean_value(t));
      break;
    default:
      throw ConfigError("noise_floor: system '" + std::string(system_key(kind)) +
                        "' has no fixed clean trajectory (only square and sine are supported)");
  }

  // Batch means give the standard error of the floor itself.
  constexpr std::size_t kBatches = 10;
  const std::size_t f_count = phi.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  struct Welford {
    double n = 0, mean = 0, m2 = 0;
    void add(double x) {
      n += 1;
      const double d = x - mean;
      mean += d / n;
      m2 += d * (x - mean);
    }
  };
  // var_sum[b] = sum over (phase, feature) of the batch-b variance estimate.
  std::vector<double> var_sum(kBatches, 0.0);
  std::vector<Welford> all(f_count), batch(f_count);
  double total_var = 0.0;
  std::vector<double> feat(f_count);
  double point[1];

  for (double c : clean) {
    std::fill(all.begin(), all.end(), Welford{});
    for (std::size_t b = 0; b < kBatches; ++b) {
      std::fill(batch.begin(), batch.end(), Welford{});
      const std::size_t begin = samples * b / kBatches;
      const std::size_t end = samples * (b + 1) / kBatches;
      for (std::size_t s = begin; s < end; ++s) {
        point[0] = c + noise_std * noise(rng);
        phi.evaluate(point, feat);
        for (std::size_t f = 0; f < f_count; ++f) {
          all[f].add(feat[f]);
          batch[f].add(feat[f]);
        }
      }
      for (std::size_t f = 0; f < f_count; ++f) {
        if (batch[f].n > 1) var_sum[b] += batch[f].m2 / (batch[f].n - 1);
      }
    }
    for (std::size_t f = 0; f < f_count; ++f) total_var += all[f].m2 / (all[f].n - 1);
  }

  const double cells = static_cast<double>(clean.size() * f_count);
  NoiseFloor out;
  out.floor = std::sqrt(total_var / cells);
  double bmean = 0.0;
  std::vector<double> bfloor(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    bfloor[b] = std::sqrt(var_sum[b] / cells);
    bmean += bfloor[b];
  }
  bmean /= kBatches;
  double ss = 0.0;
  for (double v : bfloor) ss += (v - bmean) * (v - bmean);
  out.standard_error = std::sqrt(ss / (kBatches - 1)) / std::sqrt(static_cast<double>(kBatches));
  return out;
}

std::vector<std::string> figure_keys() { return {"fig5", "fig6", "fig7", "fig8", "fig9"}; }

Preset figure_preset(std::string_view key) {
  Preset p;
  p.key = std::string(key);
  ExperimentConfig& c = p.config;
  c.n = 4;
  c.m = 4;
  c.sigma_phi = 0.3;
  c.sigma_psi = 0.1;
  c.alpha = 0.01;
  c.lambda = 1.0;
  c.runs = 30;
  c.window = 100;
  c.noise_std = 0.05;
  c.steps = 10000;
  c.chain_depth = 5;
  const std::vector<std::size_t> sweep{1, 2, 3, 4, 5, 6, 7};
  if (key == "fig5") {
    c.system = "square";
  } else if (key == "fig6") {
    c.system = "sine";
    p.depths = sweep;
  } else if (key == "fig7") {
    c.system = "square-ctl";
  } else if (key == "fig8") {
    c.system = "sine-ctl";
    p.depths = sweep;
  } else if (key == "fig9") {
    c.system = "mcar-po";
    c.steps = 20000;
  } else {
    throw UnknownKeyError("unknown figure key '" + std::string(key) +
                          "' (expected fig5, fig6, fig7, fig8 or fig9)");
  }
  return p;
}

}  // namespace ctdnet
