#pragma once

// Dense-layer kernels shared by the plain forward pass and the jet engine.

#include <Eigen/Core>

#include "pinn/network.hpp"

namespace pinn::detail {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMajorMatrix>;
using Weights = Eigen::Map<RowMajorMatrix>;
using ConstBias = Eigen::Map<const Eigen::VectorXd>;

inline ConstWeights layer_weights(const MlpNetwork& net, int layer) {
  const auto& w = net.widths();
  return ConstWeights(net.params().data() + net.weight_offset(layer), w[layer + 1], w[layer]);
}

inline ConstBias layer_bias(const MlpNetwork& net, int layer) {
  return ConstBias(net.params().data() + net.bias_offset(layer), net.widths()[layer + 1]);
}

/// Element-wise tanh. Eigen only vectorizes tanh for float, so the double
/// version is built from the vectorized exp: sign(z) (1 - e) / (1 + e) with
/// e = exp(-2|z|), and an odd Taylor polynomial below |z| = 0.3 where that
/// form loses relative accuracy. Max error is a few ulp.
template <class Derived>
Eigen::ArrayXXd tanh(const Eigen::MatrixBase<Derived>& z) {
  static constexpr double c[] = {1.0,
                                 -0.3333333333333333,
                                 0.13333333333333333,
                                 -0.05396825396825397,
                                 0.021869488536155203,
                                 -0.008863235529902197,
                                 0.003592128036572481,
                                 -0.0014558343870513183,
                                 0.000590027440945586,
                                 -0.00023912911424355248,
                                 9.691537956929451e-05,
                                 -3.927832388331683e-05,
                                 1.5918905069328964e-05};
  const auto a = z.array();
  const Eigen::ArrayXXd e = (-2.0 * a.abs()).exp();
  const Eigen::ArrayXXd big = a.sign() * (1.0 - e) / (1.0 + e);
  const Eigen::ArrayXXd z2 = a.square();
  Eigen::ArrayXXd poly = Eigen::ArrayXXd::Constant(z.rows(), z.cols(), c[12]);
  for (int k = 11; k >= 0; --k) poly = poly * z2 + c[k];
  return (a.abs() < 0.3).select(a * poly, big);
}

/// out = W_l * in + b_l (column per point).
inline void affine(const MlpNetwork& net, int layer, const Eigen::MatrixXd& in, Eigen::MatrixXd& out) {
  out.noalias() = layer_weights(net, layer) * in;
  out.colwise() += layer_bias(net, layer);
}

/// out = W_l * in (no bias; derivative channels).
inline void linear(const MlpNetwork& net, int layer, const Eigen::MatrixXd& in, Eigen::MatrixXd& out) {
  out.noalias() = layer_weights(net, layer) * in;
}

}  // namespace pinn::detail
