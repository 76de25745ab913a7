#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctdnet/basis.hpp"

namespace ctdnet {

enum class SystemKind { Square, Sine, SquareCtl, SineCtl, MountainCarPO };

/// "square", "sine", "square-ctl", "sine-ctl", "mcar-po". Throws UnknownKeyError.
SystemKind parse_system_key(std::string_view key);
std::string_view system_key(SystemKind kind);

struct SystemSpec {
  std::size_t obs_dim = 1;
  std::size_t action_dim = 0;  // 0 = uncontrolled
  BoxBounds obs_bounds;
  std::optional<BoxBounds> action_bounds;
  double noise_std = 0.05;

  bool controlled() const noexcept { return action_dim > 0; }
};

/// Default shape of each system: observations tiled on [0, 1] for the
/// waves and on the position range [-1.2, 0.6] for mountain car; actions in
/// [0, 1] for the controlled waves and throttle in [-1, 1] for mountain car.
SystemSpec system_spec(SystemKind kind, double noise_std = 0.05);

struct SystemOptions {
  double noise_std = 0.05;
  /// Square waves: starting phase in 0..9 (0-4 emit the low value).
  /// Sine waves: starting time index. Ignored by mountain car.
  std::int64_t initial_phase = 0;
};

/// A discrete-time dynamical system emitting noisy observations. Each
/// instance owns its noise generator.
class DynamicalSystem {
 public:
  virtual ~DynamicalSystem() = default;

  const SystemSpec& spec() const noexcept { return spec_; }
  SystemKind kind() const noexcept { return kind_; }

  /// Advance one step under `action` (empty for uncontrolled systems) and
  /// return the emitted observation, clean value plus N(0, noise_std^2)
  /// noise. Throws std::invalid_argument on an action dimension mismatch.
  std::vector<double> step(std::span<const double> action);

  /// Clean (noise-free) value of the most recent emission.
  std::span<const double> last_clean() const noexcept { return clean_; }

 protected:
  DynamicalSystem(SystemKind kind, SystemSpec spec, std::uint64_t seed);
  /// Write the clean observation for this step and advance internal state.
  virtual void advance(std::span<const double> action, std::span<double> clean) = 0;

 private:
  SystemKind kind_;
  SystemSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  std::vector<double> clean_;
};

/// Alternates 0 and 1, five steps each; phase advances mod 10.
class SquareWave final : public DynamicalSystem {
 public:
  SquareWave(const SystemOptions& options, std::uint64_t seed);
  int phase() const noexcept { return phase_; }
  /// Clean value of `phase` in 0..9.
  static double clean_value(int phase) { return phase < 5 ? 0.0 : 1.0; }

 private:
  void advance(std::span<const double> action, std::span<double> clean) override;
  int phase_;
};

/// (sin(0.5 t) + 1) / 2.
class SineWave final : public DynamicalSystem {
 public:
  SineWave(const SystemOptions& options, std::uint64_t seed);
  std::int64_t time() const noexcept { return t_; }
  static double clean_value(std::int64_t t) { return (std::sin(0.5 * static_cast<double>(t)) + 1.0) / 2.0; }

 private:
  void advance(std::span<const double> action, std::span<double> clean) override;
  std::int64_t t_;
};

/// Square wave whose amplitude follows the action a in [0, 1]: emits
/// (1 - a) / 2 in the low half-cycle and a + (1 - a) / 2 in the high one.
class ControlledSquareWave final : public DynamicalSystem {
 public:
  ControlledSquareWave(const SystemOptions& options, std::uint64_t seed);
  int phase() const noexcept { return phase_; }
  static double clean_value(int phase, double a) {
    return phase < 5 ? (1.0 - a) / 2.0 : a + (1.0 - a) / 2.0;
  }

 private:
  void advance(std::span<const double> action, std::span<double> clean) override;
  int phase_;
};

/// a / 2 (sin(0.5 t) + 1) + (1 - a) / 2.
class ControlledSineWave final : public DynamicalSystem {
 public:
  ControlledSineWave(const SystemOptions& options, std::uint64_t seed);
  std::int64_t time() const noexcept { return t_; }
  static double clean_value(std::int64_t t, double a) {
    return a / 2.0 * (std::sin(0.5 * static_cast<double>(t)) + 1.0) + (1.0 - a) / 2.0;
  }

 private:
  void advance(std::span<const double> action, std::span<double> clean) override;
  std::int64_t t_;
};

/// Mountain car with a continuous throttle in [-1, 1], observing position
/// only. Reaching the right edge restarts from (-0.5, 0).
class MountainCarPO final : public DynamicalSystem {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kStartPosition = -0.5;

  MountainCarPO(const SystemOptions& options, std::uint64_t seed);
  double position() const noexcept { return position_; }
  double velocity() const noexcept { return velocity_; }
  void set_state(double position, double velocity);

 private:
  void advance(std::span<const double> action, std::span<double> clean) override;
  double position_ = kStartPosition;
  double velocity_ = 0.0;
};

std::unique_ptr<DynamicalSystem> make_system(SystemKind kind, const SystemOptions& options,
                                             std::uint64_t seed);

/// Smoothed random walk over a box: the first action is uniform over the
/// box, each later one is the previous plus N(0, walk_std^2) per dimension,
/// clamped to the box.
class RandomWalkPolicy {
 public:
  RandomWalkPolicy(BoxBounds bounds, double walk_std, std::uint64_t seed);
  std::span<const double> next();
  std::span<const double> current() const noexcept { return action_; }

 private:
  BoxBounds bounds_;
  double walk_std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> step_{0.0, 1.0};
  std::vector<double> action_;
  bool started_ = false;
};

/// Independent generator seed for stream `stream` of run seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ctdnet
