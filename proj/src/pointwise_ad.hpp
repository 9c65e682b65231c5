#pragma once

// Differentiates pointwise residual expressions with respect to the jets of
// one collocation point, so adjoints can be seeded for the reverse sweep.

#include <type_traits>
#include <vector>

#include "pinn/dual.hpp"
#include "pinn/jets.hpp"
#include "pinn/problems.hpp"

namespace pinn::detail {

template <int N>
using DualJets = std::vector<JetT<ad::Dual<N>>>;

/// Slot of (output, component) in the dual directions.
constexpr int slot(int output, int component) { return output * kJetComponents + component; }

template <int N>
DualJets<N> seed_point(const JetBatch& jets, std::size_t p) {
  const int n_out = jets.n_outputs();
  DualJets<N> out(static_cast<std::size_t>(n_out));
  const auto j = static_cast<Eigen::Index>(p);
  for (int o = 0; o < n_out; ++o) {
    out[o].v = ad::Dual<N>::variable(jets.component(0)(o, j), slot(o, 0));
    out[o].dx = ad::Dual<N>::variable(jets.component(1)(o, j), slot(o, 1));
    out[o].dt = ad::Dual<N>::variable(jets.component(2)(o, j), slot(o, 2));
    out[o].dxx = ad::Dual<N>::variable(jets.component(3)(o, j), slot(o, 3));
    out[o].dtt = ad::Dual<N>::variable(jets.component(4)(o, j), slot(o, 4));
  }
  return out;
}

/// adjoint(point p) += coef * d(value)/d(jets).
template <int N>
void scatter(JetBatch& adjoint, std::size_t p, const ad::Dual<N>& value, double coef) {
  if (coef == 0.0) return;
  const int n_out = adjoint.n_outputs();
  const auto j = static_cast<Eigen::Index>(p);
  for (int o = 0; o < n_out; ++o) {
    for (int c = 0; c < kJetComponents; ++c) {
      const double d = value.d[slot(o, c)];
      if (d != 0.0) adjoint.component(c)(o, j) += coef * d;
    }
  }
}

/// Calls fn(std::integral_constant<int, N>) with N = 5 * output_count(form).
template <class Fn>
decltype(auto) with_slots(FormId form, Fn&& fn) {
  switch (output_count(form)) {
    case 1: return fn(std::integral_constant<int, 5>{});
    case 2: return fn(std::integral_constant<int, 10>{});
    case 3: return fn(std::integral_constant<int, 15>{});
    case 9: return fn(std::integral_constant<int, 45>{});
    default: return fn(std::integral_constant<int, 55>{});
  }
}

}  // namespace pinn::detail
