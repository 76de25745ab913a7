#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctdnet {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A system or figure key that names nothing.
class UnknownKeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A prediction or weight became NaN or infinite. `index` is the offending
/// row (node) of the answer network.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Learning diverged. Carries the time step and node at which the first
/// non-finite value was detected; the harness adds the run index.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t step, std::size_t node, const std::string& what)
      : std::runtime_error(what), step_(step), node_(node) {}
  std::int64_t step() const noexcept { return step_; }
  std::size_t node() const noexcept { return node_; }

 private:
  std::int64_t step_;
  std::size_t node_;
};

}  // namespace ctdnet
