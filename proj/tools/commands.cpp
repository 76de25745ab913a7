#include "commands.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <thread>

#include "CLI11.hpp"

#include "ctdnet/error.hpp"
#include "ctdnet/harness.hpp"
#include "ctdnet/io.hpp"
#include "ctdnet/systems.hpp"
#include "ctdnet/validation/suites.hpp"

namespace ctdnet::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> depths;
  std::size_t jobs = 0;  // 0: one per hardware thread
  bool per_run_csv = false;
  bool no_normalize_eval = false;
};

void add_experiment_flags(CLI::App* cmd, Flags& f, bool with_config) {
  if (with_config) cmd->add_option("--config", f.config_path, "flat JSON experiment config");
  cmd->add_option("--steps", f.steps, "time steps per run");
  cmd->add_option("--runs", f.runs, "independent runs");
  cmd->add_option("--seed", f.seed, "base seed (run r uses seed + r); overrides CTDNET_SEED");
  cmd->add_option("--depth", f.depths, "chain depth, or a comma-separated list")->delimiter(',');
  cmd->add_option("--jobs", f.jobs, "worker threads (default: hardware threads)");
  cmd->add_flag("--per-run-csv", f.per_run_csv, "also write per-run windowed RMSE");
  cmd->add_flag("--no-normalize-eval", f.no_normalize_eval,
                "weight controlled children by raw activations, without dividing by their sum");
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("CTDNET_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  try {
    std::size_t used = 0;
    if (s.front() == '-') throw std::invalid_argument(s);
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("CTDNET_SEED must be a non-negative integer, got '" + s + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return config_from_json(text);
}

// --seed beats CTDNET_SEED beats the config's base_seed.
void apply_overrides(ExperimentConfig& c, const Flags& f) {
  if (f.steps) c.steps = *f.steps;
  if (f.runs) c.runs = *f.runs;
  if (f.seed) {
    c.base_seed = *f.seed;
  } else if (auto s = env_seed()) {
    c.base_seed = *s;
  }
  if (f.no_normalize_eval) c.normalize_eval_weights = false;
  c.validate();
}

RunOptions run_options(const Flags& f) {
  RunOptions o;
  o.jobs = f.jobs > 0 ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
  return o;
}

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
  write_file_atomic(dir / ".ctdnet-write-test", "");
  fs::remove(dir / ".ctdnet-write-test", ec);
}

void report_final(std::ostream& out, const std::string& label, const LearningCurve& curve) {
  if (curve.points() == 0) return;
  const std::size_t w = curve.points() - 1;
  out << label << "final window t_end=" << curve.t_end[w] << " mean_rmse=" << curve.mean[w]
      << " se=" << curve.se[w] << " (first window " << curve.mean.front() << ")\n";
}

void write_curve(const fs::path& dir, const std::string& suffix, const LearningCurve& curve,
                 bool per_run, std::ostream& out) {
  const fs::path curve_path = dir / ("curve" + suffix + ".csv");
  write_file_atomic(curve_path, curve_csv(curve));
  out << "wrote " << curve_path.string() << '\n';
  if (per_run) {
    const fs::path runs_path = dir / ("per_run" + suffix + ".csv");
    write_file_atomic(runs_path, per_run_csv(curve));
    out << "wrote " << runs_path.string() << '\n';
  }
}

std::vector<std::pair<std::size_t, LearningCurve>> sweep(const ExperimentConfig& base,
                                                         const std::vector<std::size_t>& depths,
                                                         const Flags& f, const fs::path& dir,
                                                         std::ostream& out) {
  std::vector<std::pair<std::size_t, LearningCurve>> curves;
  for (std::size_t d : depths) {
    ExperimentConfig c = base;
    c.chain_depth = d;
    c.validate();
    LearningCurve curve = run_experiment(c, run_options(f));
    report_final(out, "d=" + std::to_string(d) + ": ", curve);
    write_curve(dir, "_d" + std::to_string(d), curve, f.per_run_csv, out);
    curves.emplace_back(d, std::move(curve));
  }
  const fs::path combined = dir / "sweep.csv";
  write_file_atomic(combined, sweep_csv(curves));
  out << "wrote " << combined.string() << '\n';
  return curves;
}

int cmd_run(const Flags& f, std::ostream& out) {
  ExperimentConfig c = load_config(f.config_path);
  if (f.depths.size() > 1) throw ConfigError("run takes a single --depth; use sweep-depth for a list");
  if (!f.depths.empty()) c.chain_depth = f.depths.front();
  apply_overrides(c, f);
  const fs::path dir = f.out_dir.empty() ? fs::path(".") : fs::path(f.out_dir);
  ensure_output_dir(dir);
  const LearningCurve curve = run_experiment(c, run_options(f));
  report_final(out, "", curve);
  write_curve(dir, "", curve, f.per_run_csv, out);
  return kOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  ExperimentConfig c = load_config(f.config_path);
  apply_overrides(c, f);
  std::vector<std::size_t> depths = f.depths;
  if (depths.empty()) depths = {1, 2, 3, 4, 5, 6, 7};
  const fs::path dir = f.out_dir.empty() ? fs::path(".") : fs::path(f.out_dir);
  ensure_output_dir(dir);
  sweep(c, depths, f, dir, out);
  return kOk;
}

int cmd_reproduce(const std::string& key, const Flags& f, std::ostream& out) {
  Preset p = figure_preset(key);
  ExperimentConfig& c = p.config;
  if (!f.depths.empty()) {
    if (p.depths.empty()) {
      if (f.depths.size() > 1) throw ConfigError(key + " runs a single depth; pass one --depth");
      c.chain_depth = f.depths.front();
    } else {
      p.depths = f.depths;
    }
  }
  apply_overrides(c, f);
  const fs::path dir = f.out_dir.empty() ? fs::path("results") / key : fs::path(f.out_dir);
  ensure_output_dir(dir);
  write_file_atomic(dir / "config.json", config_to_json(c));
  out << "wrote " << (dir / "config.json").string() << '\n';

  std::vector<std::pair<std::string, std::string>> series;
  if (p.depths.empty()) {
    const LearningCurve curve = run_experiment(c, run_options(f));
    report_final(out, key + ": ", curve);
    write_curve(dir, "", curve, f.per_run_csv, out);
    series.emplace_back("curve.csv", c.system + " d=" + std::to_string(c.chain_depth));
  } else {
    sweep(c, p.depths, f, dir, out);
    for (std::size_t d : p.depths) {
      series.emplace_back("curve_d" + std::to_string(d) + ".csv", "d=" + std::to_string(d));
    }
  }
  write_file_atomic(dir / "plot.gp", gnuplot_script(key + " (" + c.system + ")", series, key + ".png"));
  out << "wrote " << (dir / "plot.gp").string() << '\n';
  return kOk;
}

int cmd_noise_floor(const std::string& key, std::size_t samples, const Flags& f, std::ostream& out) {
  ExperimentConfig c = load_config(f.config_path);
  apply_overrides(c, f);
  const SystemKind kind = parse_system_key(key);
  const SystemSpec spec = system_spec(kind, c.noise_std);
  const RbfGrid phi = make_grid(spec.obs_bounds, c.n, c.sigma_phi);
  const NoiseFloor nf = noise_floor(kind, phi, samples, c.base_seed, c.noise_std);
  const std::string csv = noise_floor_csv(key, samples, nf);
  out << csv;
  if (!f.out_dir.empty()) {
    ensure_output_dir(f.out_dir);
    const fs::path path = fs::path(f.out_dir) / "noise_floor.csv";
    write_file_atomic(path, csv);
    out << "wrote " << path.string() << '\n';
  }
  return kOk;
}

int cmd_validate(const std::string& key, std::ostream& out) {
  const validation::SuiteReport report = validation::run_suite(key);
  report.print(out);
  return report.passed() ? kOk : kValidationFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous TD networks: experiments and validation", "ctdnet"};
  app.require_subcommand(1);

  Flags f;
  std::string key;
  std::size_t samples = 1000000;

  auto* run = app.add_subcommand("run", "run one experiment and write curve.csv");
  add_experiment_flags(run, f, true);
  run->add_option("--out", f.out_dir, "output directory (default .)");

  auto* sweep_cmd = app.add_subcommand("sweep-depth", "run one experiment per chain depth");
  add_experiment_flags(sweep_cmd, f, true);
  sweep_cmd->add_option("--out", f.out_dir, "output directory (default .)");

  auto* repro = app.add_subcommand("reproduce", "run a figure preset: fig5 .. fig9");
  repro->add_option("figure", key, "fig5, fig6, fig7, fig8 or fig9")->required();
  add_experiment_flags(repro, f, false);
  repro->add_option("--out", f.out_dir, "output directory (default results/<figure>)");

  auto* floor = app.add_subcommand("noise-floor", "Monte-Carlo one-step noise floor of a wave system");
  floor->add_option("system", key, "square or sine")->required();
  floor->add_option("--samples", samples, "draws per phase")->check(CLI::PositiveNumber);
  floor->add_option("--config", f.config_path, "config supplying n, sigma_phi and noise_std");
  floor->add_option("--seed", f.seed, "generator seed");
  floor->add_option("--out", f.out_dir, "also write noise_floor.csv here");

  auto* validate = app.add_subcommand("validate", "run a property suite");
  validate->add_option("suite", key, "traces, oracle, gradients or systems")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(f, out);
    if (sweep_cmd->parsed()) return cmd_sweep(f, out);
    if (repro->parsed()) return cmd_reproduce(key, f, out);
    if (floor->parsed()) return cmd_noise_floor(key, samples, f, out);
    if (validate->parsed()) return cmd_validate(key, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << " (node " << e.node() << ", step " << e.step() << ")\n";
    return kDivergence;
  } catch (const UnknownKeyError& e) {
    err << "error: " << e.what() << '\n';
    return kUnknownKey;
  } catch (const IoError& e) {
    err << "output error: " << e.what() << '\n';
    return kOutputError;
  }
  return kConfigError;
}

}  // namespace ctdnet::cli
