#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pinn/network.hpp"
#include "pinn/types.hpp"

namespace pinn {

/// Value of one network output with its input derivatives up to order two.
/// Only the pure second derivatives are carried; there is no dxt channel.
struct Jet2 {
  double v = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double dxx = 0.0;
  double dtt = 0.0;
};

enum class JetComponent : int { v = 0, dx = 1, dt = 2, dxx = 3, dtt = 4 };
inline constexpr int kJetComponents = 5;

/// Jets for a batch of points: one (n_out x n_points) matrix per component,
/// column j holding point j in the order the points were supplied.
class JetBatch {
 public:
  JetBatch() = default;
  JetBatch(int n_out, std::size_t n_points);

  int n_outputs() const noexcept { return n_out_; }
  std::size_t n_points() const noexcept { return n_points_; }

  Eigen::MatrixXd& component(JetComponent c) { return comp_[static_cast<int>(c)]; }
  const Eigen::MatrixXd& component(JetComponent c) const { return comp_[static_cast<int>(c)]; }
  Eigen::MatrixXd& component(int c) { return comp_[c]; }
  const Eigen::MatrixXd& component(int c) const { return comp_[c]; }

  Jet2 at(std::size_t point, int output) const;
  void set(std::size_t point, int output, const Jet2& jet);
  /// Jets of every output at one point.
  std::vector<Jet2> point(std::size_t point) const;

  void set_zero();

 private:
  int n_out_ = 0;
  std::size_t n_points_ = 0;
  std::array<Eigen::MatrixXd, kJetComponents> comp_;
};

/// Jets of every network output at one point. Input 0 is x, input 1 is t; a
/// single-input network has identically zero t-derivatives.
std::vector<Jet2> jet_forward(const MlpNetwork& net, Point point);

struct EvalOptions {
  /// Worker threads for per-block evaluation. Results do not depend on it.
  int workers = 1;
  /// Points per block. Gradient contributions are reduced block by block in
  /// point order, so this (not `workers`) fixes the summation order.
  std::size_t block_size = 128;
};

JetBatch jet_forward(const MlpNetwork& net, std::span<const Point> points, const EvalOptions& opts = {});

/// A loss over a batch of jets.
///
/// Returns the scalar loss and writes dLoss/d(jet component) into `adjoint`,
/// which arrives sized like `jets` and zero-filled.
using LossFn = std::function<double(const JetBatch& jets, JetBatch& adjoint)>;

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Loss and its exact gradient with respect to every network parameter.
///
/// Forward sweep propagates jets layer by layer, the loss supplies adjoints of
/// the output jets, and a single reverse sweep over the jet graph accumulates
/// parameter gradients. Throws DivergedError (with the first offending point
/// index when one can be identified) on a non-finite loss or gradient.
LossGradient loss_gradient(const MlpNetwork& net, const LossFn& loss_fn, std::span<const Point> points,
                           const EvalOptions& opts = {});

}  // namespace pinn
