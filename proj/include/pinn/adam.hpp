#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pinn {

struct AdamState {
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment, component-wise >= 0
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double delta = 1e-8;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One Adam update in place:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + delta)
/// with bias-corrected m_hat, v_hat. Throws DivergedError on a non-finite
/// gradient (state and params untouched) and InvalidArgument on size mismatch.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad, double lr);

}  // namespace pinn
