#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ctdnet::validation {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;

  bool passed() const;
  /// One "PASS|FAIL <suite>/<check>: <detail>" line per check.
  void print(std::ostream& os) const;
};

/// Instrumented controlled run (1000 steps): every trace is updated exactly
/// depth(node) times, accumulated conditions equal the running product of
/// the activations seen, and the trace count stays within node_count * d.
/// Also checks that lambda = 0 leaves only first-step updates (500 steps).
SuiteReport traces_suite();

/// Learner against DiscreteTdNetwork on a 5-state cycle world with
/// indicator features and activations: per-step weight deltas over 200
/// steps must agree within 1e-12.
SuiteReport oracle_suite();

/// Central finite differences of y = W x with respect to each weight on 100
/// random instances, against x_j, within 1e-6 relative.
SuiteReport gradients_suite();

/// Mountain car hand example, noise-free wave closed forms, state bounds,
/// noise scale and policy smoothness.
SuiteReport systems_suite();

/// "traces", "oracle", "gradients" or "systems". Throws UnknownKeyError.
SuiteReport run_suite(std::string_view key);
std::vector<std::string> suite_keys();

}  // namespace ctdnet::validation
