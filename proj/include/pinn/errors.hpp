#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pinn {

// Bad shapes, out-of-range steps, non-finite inputs.
using InvalidArgument = std::invalid_argument;

/// Non-finite loss or gradient during training or evaluation.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, long point_index = -1)
      : std::runtime_error(what), point_index_(point_index) {}

  /// Index into the evaluated batch of the first offending point, or -1.
  long point_index() const noexcept { return point_index_; }

 private:
  long point_index_;
};

/// Barrier margin at or below the buffer depth.
class InsideBufferError : public std::runtime_error {
 public:
  InsideBufferError(double margin, double depth)
      : std::runtime_error("barrier margin " + std::to_string(margin) +
                           " is inside the buffer of depth " + std::to_string(depth)),
        margin_(margin),
        depth_(depth) {}
  double margin() const noexcept { return margin_; }
  double depth() const noexcept { return depth_; }

 private:
  double margin_;
  double depth_;
};

/// Kirchhoff rod extension output collapsed to ~0 at a collocation point.
class NearSingularExtensionError : public std::runtime_error {
 public:
  explicit NearSingularExtensionError(std::size_t point_index)
      : std::runtime_error("near-singular extension at point " + std::to_string(point_index)),
        point_index_(point_index) {}
  std::size_t point_index() const noexcept { return point_index_; }

 private:
  std::size_t point_index_;
};

class InsufficientPeaksError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class UnknownPresetError : public std::runtime_error {
 public:
  explicit UnknownPresetError(const std::string& name)
      : std::runtime_error("unknown preset '" + name + "'") {}
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pinn
