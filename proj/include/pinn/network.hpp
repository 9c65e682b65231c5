#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pinn/types.hpp"

namespace pinn {

enum class InitKind { he_uniform, glorot_uniform };

std::string_view to_string(InitKind kind);
InitKind parse_init_kind(std::string_view name);

struct Initializer {
  InitKind kind = InitKind::he_uniform;
  std::uint64_t seed = 0;
};

/// Number of weights and biases of a dense network with the given layer widths.
/// Throws InvalidArgument for fewer than two widths or a width below one.
std::size_t param_count(std::span<const int> widths);

/// Fan-based uniform initialization; biases are zero.
///
/// Weights of connection layer l are drawn in the order of the flat layout
/// (row-major, output unit major) from a single stream seeded with
/// `init.seed`, so the result is a pure function of (kind, seed, widths).
std::vector<double> init_params(std::span<const int> widths, const Initializer& init);

/// Dense feed-forward network: tanh on hidden layers, identity on the output.
///
/// Flat parameter layout, for each connection layer l = 0..L-1 in order:
/// the weight matrix W_l (widths[l+1] rows by widths[l] columns, row-major),
/// followed by the bias vector b_l (widths[l+1] entries).
class MlpNetwork {
 public:
  static constexpr std::string_view kActivation = "tanh";

  MlpNetwork(std::vector<int> widths, std::vector<double> params);

  static MlpNetwork initialized(std::vector<int> widths, const Initializer& init);
  static MlpNetwork zeros(std::vector<int> widths);

  const std::vector<int>& widths() const noexcept { return widths_; }
  int n_inputs() const noexcept { return widths_.front(); }
  int n_outputs() const noexcept { return widths_.back(); }
  /// Number of connection layers (widths.size() - 1).
  int n_layers() const noexcept { return static_cast<int>(widths_.size()) - 1; }

  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }
  void set_params(std::span<const double> params);

  std::size_t weight_offset(int layer) const { return offsets_.at(layer); }
  std::size_t bias_offset(int layer) const {
    return offsets_.at(layer) + static_cast<std::size_t>(widths_[layer]) * widths_[layer + 1];
  }

  /// Plain forward pass. Input size must equal n_inputs(); throws
  /// InvalidArgument on a size mismatch or a non-finite input.
  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(Point p) const;

 private:
  std::vector<int> widths_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
};

}  // namespace pinn
