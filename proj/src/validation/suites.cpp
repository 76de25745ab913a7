#include "ctdnet/validation/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include "ctdnet/answer_net.hpp"
#include "ctdnet/basis.hpp"
#include "ctdnet/error.hpp"
#include "ctdnet/learner.hpp"
#include "ctdnet/question_net.hpp"
#include "ctdnet/systems.hpp"
#include "ctdnet/validation/discrete_oracle.hpp"

namespace ctdnet::validation {

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void SuiteReport::print(std::ostream& os) const {
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << name << '/' << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add(SuiteReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back(Check{std::move(name), ok, std::move(detail)});
}

std::size_t condition_at(const QuestionNetwork& net, std::size_t node, std::size_t age) {
  const Target from = net.kth_parent(node, age - 1);
  return *net.node(std::get<NodePred>(from).node).condition;
}

// Drives a learner on the controlled square wave, recording inputs and
// activations per step. `visit` sees every StepResult.
template <typename Visit>
void drive_controlled(Learner& learner, std::size_t steps, std::uint64_t seed,
                      std::vector<std::vector<double>>& inputs,
                      std::vector<std::vector<double>>& activations, Visit visit) {
  const SystemKind kind = SystemKind::SquareCtl;
  const SystemSpec spec = system_spec(kind);
  auto system = make_system(kind, SystemOptions{}, derive_seed(seed, 0));
  RandomWalkPolicy policy(*spec.action_bounds, 0.1, derive_seed(seed, 1));
  for (std::size_t t = 0; t < steps; ++t) {
    const auto a = policy.next();
    const std::vector<double> action(a.begin(), a.end());
    const auto obs = system->step(action);
    StepResult res = learner.step(action, obs);
    inputs.emplace_back(learner.last_input().values().begin(), learner.last_input().values().end());
    activations.push_back(learner.activation_grid()->evaluate(action));
    visit(t, res);
  }
}

}  // namespace

SuiteReport traces_suite() {
  SuiteReport report{"traces", {}};
  const std::size_t depth = 5;
  const SystemSpec spec = system_spec(SystemKind::SquareCtl);

  {
    constexpr std::size_t kSteps = 1000;
    QuestionNetwork net = build_chain_network(4, 4, depth);
    LearnerParams params;
    params.alpha = 0.005;
    params.record_updates = true;
    Learner learner(net, make_grid(spec.obs_bounds, 4, 0.3), make_grid(*spec.action_bounds, 4, 0.1),
                    params);

    std::vector<std::vector<double>> inputs, acts;
    std::map<std::pair<std::size_t, std::int64_t>, std::size_t> counts;
    double worst_condition = 0.0;
    std::size_t bad_age = 0, bad_count_bound = 0, bad_stored = 0, max_traces = 0;
    const std::size_t bound = net.node_count() * depth;

    drive_controlled(learner, kSteps, 11, inputs, acts, [&](std::size_t t, const StepResult& res) {
      for (const TraceUpdate& u : res.diagnostics.updates) {
        const auto age = static_cast<std::size_t>(static_cast<std::int64_t>(t) - u.birth);
        if (age != u.age || age < 1 || age > net.depth(u.node)) ++bad_age;
        ++counts[{u.node, u.birth}];
        double expected = 1.0;
        for (std::size_t a = 1; a <= age; ++a) {
          expected *= acts[static_cast<std::size_t>(u.birth) + a][condition_at(net, u.node, a)];
        }
        worst_condition = std::max(worst_condition, std::abs(expected - u.condition));
      }
      const std::size_t n = res.diagnostics.trace_count;
      max_traces = std::max(max_traces, n);
      if (n > bound || n != learner.traces().size()) ++bad_count_bound;
      for (const TraceView& tv : learner.traces()) {
        const auto& x = inputs[static_cast<std::size_t>(tv.birth)];
        if (!std::equal(x.begin(), x.end(), tv.stored_input.begin(), tv.stored_input.end())) {
          ++bad_stored;
        }
      }
    });

    std::size_t wrong = 0, checked = 0;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(kSteps); ++b) {
        const auto it = counts.find({i, b});
        const std::size_t got = it == counts.end() ? 0 : it->second;
        if (static_cast<std::size_t>(b) + net.depth(i) <= kSteps - 1) {
          ++checked;
          if (got != net.depth(i)) ++wrong;
        } else if (got > net.depth(i)) {
          ++wrong;
        }
      }
    }
    add(report, "update-count", wrong == 0 && bad_age == 0,
        std::to_string(checked) + " completed traces, " + std::to_string(wrong) +
            " with a wrong update count, " + std::to_string(bad_age) + " bad ages");
    add(report, "accumulated-condition", worst_condition <= 1e-12,
        "max |condition - running product| = " + fmt(worst_condition) + " (tol 1e-12)");
    add(report, "trace-count-bound", bad_count_bound == 0,
        "max live traces " + std::to_string(max_traces) + " <= " + std::to_string(bound));
    add(report, "stored-input", bad_stored == 0,
        std::to_string(bad_stored) + " traces whose stored input differs from x at birth");
  }

  {
    constexpr std::size_t kSteps = 500;
    QuestionNetwork net = build_chain_network(4, 4, depth);
    LearnerParams params;
    params.alpha = 0.01;
    params.lambda = 0.0;
    params.record_updates = true;
    Learner learner(net, make_grid(spec.obs_bounds, 4, 0.3), make_grid(*spec.action_bounds, 4, 0.1),
                    params);
    WeightMatrix shadow(learner.weights().rows(), learner.weights().cols());
    std::vector<std::vector<double>> inputs, acts;
    std::size_t later = 0, later_nonzero = 0, first_nonzero = 0;
    drive_controlled(learner, kSteps, 12, inputs, acts, [&](std::size_t, const StepResult& res) {
      for (const TraceUpdate& u : res.diagnostics.updates) {
        if (u.age >= 2) {
          ++later;
          if (u.scale != 0.0) ++later_nonzero;
          continue;
        }
        if (u.scale != 0.0) ++first_nonzero;
        const auto& x = inputs[static_cast<std::size_t>(u.birth)];
        auto row = shadow.row(u.node);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += u.scale * x[j];
      }
    });
    double diff = 0.0;
    for (std::size_t k = 0; k < shadow.data().size(); ++k) {
      diff = std::max(diff, std::abs(shadow.data()[k] - learner.weights().data()[k]));
    }
    add(report, "lambda-zero", later > 0 && later_nonzero == 0 && first_nonzero > 0 && diff == 0.0,
        std::to_string(later) + " updates at age >= 2, " + std::to_string(later_nonzero) +
            " nonzero; max |W - W(age 1 only)| = " + fmt(diff));
  }
  return report;
}

SuiteReport oracle_suite() {
  SuiteReport report{"oracle", {}};

  struct Case {
    const char* name;
    bool controlled;
    std::size_t depth;
    double alpha;
    double lambda;
  };
  const Case cases[] = {
      {"controlled-lambda1", true, 3, 0.05, 1.0},
      {"controlled-lambda0.6", true, 4, 0.05, 0.6},
      {"uncontrolled-lambda0.8", false, 3, 0.05, 0.8},
  };

  for (const Case& c : cases) {
    constexpr std::size_t kStates = 5, kSteps = 200;
    QuestionNetwork net = build_chain_network(2, c.controlled ? 2 : 0, c.depth);
    Learner learner(net, LearnerParams{c.alpha, c.lambda});
    DiscreteTdNetwork oracle(net, c.alpha, c.lambda);

    std::mt19937_64 rng(99);
    std::bernoulli_distribution advance(0.6);
    std::size_t state = 0;
    std::vector<double> before_l, before_o;
    double worst = 0.0, largest = 0.0;

    for (std::size_t t = 0; t < kSteps; ++t) {
      const std::size_t action = advance(rng) ? 0 : 1;  // 0 advance, 1 stay
      if (action == 0) state = (state + 1) % kStates;
      const std::size_t symbol = state == 0 ? 1 : 0;
      std::vector<double> features(2, 0.0);
      features[symbol] = 1.0;
      std::vector<double> activations;
      if (c.controlled) {
        activations.assign(2, 0.0);
        activations[action] = 1.0;
      }

      const auto wl = learner.weights().data();
      before_l.assign(wl.begin(), wl.end());
      before_o = oracle.weights();
      learner.step_encoded(features, activations);
      oracle.step(symbol, c.controlled ? std::optional<std::size_t>(action) : std::nullopt);

      const auto al = learner.weights().data();
      const auto& ao = oracle.weights();
      for (std::size_t k = 0; k < ao.size(); ++k) {
        const double dl = al[k] - before_l[k];
        const double d_o = ao[k] - before_o[k];
        worst = std::max(worst, std::abs(dl - d_o));
        largest = std::max(largest, std::abs(d_o));
      }
    }
    add(report, c.name, worst <= 1e-12 && largest > 0.0,
        "max |delta W - delta W_oracle| = " + fmt(worst) + " over " + std::to_string(kSteps) +
            " steps (largest oracle delta " + fmt(largest) + ")");
  }
  return report;
}

SuiteReport gradients_suite() {
  SuiteReport report{"gradients", {}};
  constexpr std::size_t kInstances = 100;
  constexpr double kH = 1e-6;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> rows_d(1, 8), cols_d(1, 24);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), mag(0.05, 1.0);
  std::bernoulli_distribution sign(0.5);

  double worst_rel = 0.0, worst_cross = 0.0;
  std::size_t partials = 0;
  for (std::size_t n = 0; n < kInstances; ++n) {
    const std::size_t rows = rows_d(rng), cols = cols_d(rng);
    WeightMatrix w(rows, cols);
    for (double& v : w.data()) v = unit(rng);
    std::vector<double> x(cols);
    for (double& v : x) v = sign(rng) ? mag(rng) : -mag(rng);

    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double w0 = w(i, j);
        const double wp = w0 + kH, wm = w0 - kH;
        w(i, j) = wp;
        const auto yp = predict(w, x);
        w(i, j) = wm;
        const auto ym = predict(w, x);
        w(i, j) = w0;
        const double fd = (yp[i] - ym[i]) / (wp - wm);
        worst_rel = std::max(worst_rel, std::abs(fd - x[j]) / std::abs(x[j]));
        for (std::size_t k = 0; k < rows; ++k) {
          if (k != i) worst_cross = std::max(worst_cross, std::abs(yp[k] - ym[k]));
        }
        ++partials;
      }
    }
  }
  add(report, "dy/dw", worst_rel <= 1e-6,
      std::to_string(partials) + " partials over " + std::to_string(kInstances) +
          " instances, max relative error " + fmt(worst_rel) + " (tol 1e-6)");
  add(report, "other-rows", worst_cross == 0.0,
      "max change in other outputs " + fmt(worst_cross));
  return report;
}

SuiteReport systems_suite() {
  SuiteReport report{"systems", {}};
  const SystemOptions clean{0.0, 0};

  {
    MountainCarPO car(clean, 1);
    car.set_state(-0.5, 0.0);
    const double zero = 0.0;
    const auto obs = car.step(std::span<const double>(&zero, 1));
    // -0.0025 cos(3 * -0.5), worked by hand
    const double v_expected = -1.7684300416925727e-4;
    const double p_expected = -0.5001768430041692;
    const double dv = std::abs(car.velocity() - v_expected);
    const double dp = std::abs(car.position() - p_expected);
    add(report, "mcar-hand-step", dv <= 1e-9 && dp <= 1e-9 && obs[0] == car.position(),
        "velocity " + fmt(car.velocity()) + " (err " + fmt(dv) + "), position " +
            fmt(car.position()) + " (err " + fmt(dp) + ")");
  }

  {
    MountainCarPO car(clean, 1);
    car.set_state(-1.19, -0.07);
    const double back = -1.0;
    car.step(std::span<const double>(&back, 1));
    const bool wall = car.position() == -1.2 && car.velocity() == 0.0;
    car.set_state(0.59, 0.07);
    const double fwd = 1.0;
    car.step(std::span<const double>(&fwd, 1));
    const bool reset = car.position() == -0.5 && car.velocity() == 0.0;
    add(report, "mcar-edges", wall && reset,
        std::string("left wall stops the car: ") + (wall ? "yes" : "no") +
            ", right edge restarts: " + (reset ? "yes" : "no"));
  }

  {
    MountainCarPO car(clean, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> throttle(-1.0, 1.0);
    std::size_t violations = 0;
    for (int t = 0; t < 100000; ++t) {
      const double a = throttle(rng);
      car.step(std::span<const double>(&a, 1));
      if (car.position() < -1.2 || car.position() > 0.6 || std::abs(car.velocity()) > 0.07) {
        ++violations;
      }
    }
    add(report, "mcar-bounds", violations == 0,
        std::to_string(violations) + " out-of-bounds states in 100000 random steps");
  }

  {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t mismatches = 0;
    SquareWave sq(clean, 1);
    SineWave sn(clean, 1);
    ControlledSquareWave csq(clean, 1);
    ControlledSineWave csn(clean, 1);
    for (int t = 0; t < 1000; ++t) {
      const double a = unit(rng);
      const double high = (t % 10) >= 5 ? 1.0 : 0.0;
      const double s = std::sin(0.5 * t);
      if (sq.step({})[0] != high) ++mismatches;
      if (sn.step({})[0] != (s + 1.0) / 2.0) ++mismatches;
      const double csq_expected = (t % 10) >= 5 ? a + (1.0 - a) / 2.0 : (1.0 - a) / 2.0;
      if (csq.step(std::span<const double>(&a, 1))[0] != csq_expected) ++mismatches;
      if (csn.step(std::span<const double>(&a, 1))[0] != a / 2.0 * (s + 1.0) + (1.0 - a) / 2.0) {
        ++mismatches;
      }
    }
    add(report, "wave-closed-forms", mismatches == 0,
        std::to_string(mismatches) + " mismatches over 4 x 1000 noise-free steps");
  }

  {
    constexpr int kSteps = 100000;
    constexpr double kStd = 0.05;
    SineWave sn(SystemOptions{kStd, 0}, 21);
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < kSteps; ++t) {
      const double e = sn.step({})[0] - sn.last_clean()[0];
      sum += e;
      sq += e * e;
    }
    const double mean = sum / kSteps;
    const double sd = std::sqrt((sq - kSteps * mean * mean) / (kSteps - 1));
    add(report, "noise-scale", std::abs(sd - kStd) <= 0.05 * kStd,
        "sample noise std " + fmt(sd) + " vs " + fmt(kStd) + " (within 5%)");
  }

  {
    RandomWalkPolicy policy(BoxBounds::uniform(1, 0.0, 1.0), 0.1, 4);
    constexpr int kSteps = 100000;
    std::vector<double> a(kSteps);
    bool inside = true;
    for (int t = 0; t < kSteps; ++t) {
      a[t] = policy.next()[0];
      inside = inside && a[t] >= 0.0 && a[t] <= 1.0;
    }
    double mean = 0.0;
    for (double v : a) mean += v;
    mean /= kSteps;
    double num = 0.0, den = 0.0;
    for (int t = 0; t < kSteps; ++t) {
      den += (a[t] - mean) * (a[t] - mean);
      if (t > 0) num += (a[t] - mean) * (a[t - 1] - mean);
    }
    const double rho = num / den;
    add(report, "policy-smoothness", inside && rho > 0.9,
        "lag-1 autocorrelation " + fmt(rho) + (inside ? ", all actions in bounds" : ", OUT OF BOUNDS"));
  }
  return report;
}

std::vector<std::string> suite_keys() { return {"traces", "oracle", "gradients", "systems"}; }

SuiteReport run_suite(std::string_view key) {
  SuiteReport (*suite)() = nullptr;
  if (key == "traces") suite = traces_suite;
  if (key == "oracle") suite = oracle_suite;
  if (key == "gradients") suite = gradients_suite;
  if (key == "systems") suite = systems_suite;
  if (suite) {
    try {
      return suite();
    } catch (const DivergenceError& e) {
      return SuiteReport{std::string(key), {Check{"diverged", false, e.what()}}};
    }
  }
  throw UnknownKeyError("unknown validation suite '" + std::string(key) +
                        "' (expected traces, oracle, gradients or systems)");
}

}  // namespace ctdnet::validation
