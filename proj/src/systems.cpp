#include "ctdnet/systems.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "ctdnet/error.hpp"

namespace ctdnet {

namespace {

constexpr std::array<std::pair<SystemKind, std::string_view>, 5> kKeys{{
    {SystemKind::Square, "square"},
    {SystemKind::Sine, "sine"},
    {SystemKind::SquareCtl, "square-ctl"},
    {SystemKind::SineCtl, "sine-ctl"},
    {SystemKind::MountainCarPO, "mcar-po"},
}};

int wrap_phase(std::int64_t phase) { return static_cast<int>(((phase % 10) + 10) % 10); }

double single_action(std::span<const double> action) { return action[0]; }

}  // namespace

SystemKind parse_system_key(std::string_view key) {
  for (const auto& [kind, name] : kKeys) {
    if (name == key) return kind;
  }
  throw UnknownKeyError("unknown system key '" + std::string(key) +
                        "' (expected square, sine, square-ctl, sine-ctl or mcar-po)");
}

std::string_view system_key(SystemKind kind) {
  for (const auto& [k, name] : kKeys) {
    if (k == kind) return name;
  }
  return "?";
}

SystemSpec system_spec(SystemKind kind, double noise_std) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("system_spec: noise_std must be >= 0");
  switch (kind) {
    case SystemKind::Square:
    case SystemKind::Sine:
      return SystemSpec{1, 0, BoxBounds::uniform(1, 0.0, 1.0), std::nullopt, noise_std};
    case SystemKind::SquareCtl:
    case SystemKind::SineCtl:
      return SystemSpec{1, 1, BoxBounds::uniform(1, 0.0, 1.0), BoxBounds::uniform(1, 0.0, 1.0),
                        noise_std};
    case SystemKind::MountainCarPO:
      return SystemSpec{1, 1,
                        BoxBounds::uniform(1, MountainCarPO::kMinPosition, MountainCarPO::kMaxPosition),
                        BoxBounds::uniform(1, -1.0, 1.0), noise_std};
  }
  throw std::invalid_argument("system_spec: bad kind");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DynamicalSystem::DynamicalSystem(SystemKind kind, SystemSpec spec, std::uint64_t seed)
    : kind_(kind), spec_(std::move(spec)), rng_(seed), clean_(spec_.obs_dim, 0.0) {}

std::vector<double> DynamicalSystem::step(std::span<const double> action) {
  if (action.size() != spec_.action_dim) {
    throw std::invalid_argument("DynamicalSystem::step: action has dimension " +
                                std::to_string(action.size()) + ", expected " +
                                std::to_string(spec_.action_dim));
  }
  advance(action, clean_);
  std::vector<double> obs(clean_.size());
  for (std::size_t k = 0; k < obs.size(); ++k) obs[k] = clean_[k] + spec_.noise_std * noise_(rng_);
  return obs;
}

SquareWave::SquareWave(const SystemOptions& options, std::uint64_t seed)
    : DynamicalSystem(SystemKind::Square, system_spec(SystemKind::Square, options.noise_std), seed),
      phase_(wrap_phase(options.initial_phase)) {}

void SquareWave::advance(std::span<const double>, std::span<double> clean) {
  clean[0] = clean_value(phase_);
  phase_ = (phase_ + 1) % 10;
}

SineWave::SineWave(const SystemOptions& options, std::uint64_t seed)
    : DynamicalSystem(SystemKind::Sine, system_spec(SystemKind::Sine, options.noise_std), seed),
      t_(options.initial_phase) {}

void SineWave::advance(std::span<const double>, std::span<double> clean) {
  clean[0] = clean_value(t_);
  ++t_;
}

ControlledSquareWave::ControlledSquareWave(const SystemOptions& options, std::uint64_t seed)
    : DynamicalSystem(SystemKind::SquareCtl, system_spec(SystemKind::SquareCtl, options.noise_std),
                      seed),
      phase_(wrap_phase(options.initial_phase)) {}

void ControlledSquareWave::advance(std::span<const double> action, std::span<double> clean) {
  clean[0] = clean_value(phase_, single_action(action));
  phase_ = (phase_ + 1) % 10;
}

ControlledSineWave::ControlledSineWave(const SystemOptions& options, std::uint64_t seed)
    : DynamicalSystem(SystemKind::SineCtl, system_spec(SystemKind::SineCtl, options.noise_std), seed),
      t_(options.initial_phase) {}

void ControlledSineWave::advance(std::span<const double> action, std::span<double> clean) {
  clean[0] = clean_value(t_, single_action(action));
  ++t_;
}

MountainCarPO::MountainCarPO(const SystemOptions& options, std::uint64_t seed)
    : DynamicalSystem(SystemKind::MountainCarPO,
                      system_spec(SystemKind::MountainCarPO, options.noise_std), seed) {}

void MountainCarPO::set_state(double position, double velocity) {
  if (!(position >= kMinPosition && position <= kMaxPosition) ||
      !(velocity >= -kMaxSpeed && velocity <= kMaxSpeed)) {
    throw std::invalid_argument("MountainCarPO::set_state: state out of bounds");
  }
  position_ = position;
  velocity_ = velocity;
}

void MountainCarPO::advance(std::span<const double> action, std::span<double> clean) {
  const double throttle = single_action(action);
  velocity_ = std::clamp(velocity_ + 0.001 * throttle - 0.0025 * std::cos(3.0 * position_),
                         -kMaxSpeed, kMaxSpeed);
  position_ = std::clamp(position_ + velocity_, kMinPosition, kMaxPosition);
  if (position_ <= kMinPosition) velocity_ = 0.0;
  if (position_ >= kMaxPosition) {
    position_ = kStartPosition;
    velocity_ = 0.0;
  }
  clean[0] = position_;
}

std::unique_ptr<DynamicalSystem> make_system(SystemKind kind, const SystemOptions& options,
                                             std::uint64_t seed) {
  switch (kind) {
    case SystemKind::Square:
      return std::make_unique<SquareWave>(options, seed);
    case SystemKind::Sine:
      return std::make_unique<SineWave>(options, seed);
    case SystemKind::SquareCtl:
      return std::make_unique<ControlledSquareWave>(options, seed);
    case SystemKind::SineCtl:
      return std::make_unique<ControlledSineWave>(options, seed);
    case SystemKind::MountainCarPO:
      return std::make_unique<MountainCarPO>(options, seed);
  }
  throw std::invalid_argument("make_system: bad kind");
}

RandomWalkPolicy::RandomWalkPolicy(BoxBounds bounds, double walk_std, std::uint64_t seed)
    : bounds_(std::move(bounds)), walk_std_(walk_std), rng_(seed), action_(bounds_.dim()) {
  if (!(walk_std_ >= 0.0)) throw std::invalid_argument("RandomWalkPolicy: walk_std must be >= 0");
}

std::span<const double> RandomWalkPolicy::next() {
  if (!started_) {
    for (std::size_t k = 0; k < action_.size(); ++k) {
      std::uniform_real_distribution<double> uniform(bounds_.low()[k], bounds_.high()[k]);
      action_[k] = uniform(rng_);
    }
    started_ = true;
  } else {
    for (double& a : action_) a += walk_std_ * step_(rng_);
    bounds_.clamp(action_);
  }
  return action_;
}

}  // namespace ctdnet
