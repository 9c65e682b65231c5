#include "pinn/network.hpp"

#include <cmath>
#include <string>

#include "kernels.hpp"
#include "pinn/errors.hpp"
#include "pinn/jets.hpp"
#include "pinn/random.hpp"

namespace pinn {

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::he_uniform: return "he_uniform";
    case InitKind::glorot_uniform: return "glorot_uniform";
  }
  return "unknown";
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "he_uniform" || name == "he" || name == "He uniform") return InitKind::he_uniform;
  if (name == "glorot_uniform" || name == "glorot" || name == "Glorot uniform") return InitKind::glorot_uniform;
  throw InvalidArgument("unknown initializer '" + std::string(name) + "'");
}

std::size_t param_count(std::span<const int> widths) {
  if (widths.size() < 2) throw InvalidArgument("a network needs at least two layer widths");
  std::size_t total = 0;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    if (widths[l] < 1) throw InvalidArgument("layer widths must be >= 1");
    if (l == 0) continue;
    const auto fan_in = static_cast<std::size_t>(widths[l - 1]);
    const auto fan_out = static_cast<std::size_t>(widths[l]);
    total += fan_in * fan_out + fan_out;
  }
  return total;
}

std::vector<double> init_params(std::span<const int> widths, const Initializer& init) {
  std::vector<double> params(param_count(widths), 0.0);
  Rng rng(init.seed);
  std::size_t pos = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    const double fan_in = widths[l - 1];
    const double fan_out = widths[l];
    const double limit = init.kind == InitKind::he_uniform ? std::sqrt(6.0 / fan_in)
                                                           : std::sqrt(6.0 / (fan_in + fan_out));
    const std::size_t n_weights = static_cast<std::size_t>(widths[l - 1]) * widths[l];
    for (std::size_t i = 0; i < n_weights; ++i) params[pos++] = rng.uniform(-limit, limit);
    pos += static_cast<std::size_t>(widths[l]);  // biases stay zero
  }
  return params;
}

MlpNetwork::MlpNetwork(std::vector<int> widths, std::vector<double> params)
    : widths_(std::move(widths)), params_(std::move(params)) {
  if (params_.size() != param_count(widths_)) {
    throw InvalidArgument("parameter vector has " + std::to_string(params_.size()) +
                          " entries, widths require " + std::to_string(param_count(widths_)));
  }
  std::size_t pos = 0;
  for (std::size_t l = 1; l < widths_.size(); ++l) {
    offsets_.push_back(pos);
    pos += static_cast<std::size_t>(widths_[l - 1]) * widths_[l] + widths_[l];
  }
}

MlpNetwork MlpNetwork::initialized(std::vector<int> widths, const Initializer& init) {
  auto params = init_params(widths, init);
  return MlpNetwork(std::move(widths), std::move(params));
}

MlpNetwork MlpNetwork::zeros(std::vector<int> widths) {
  const auto n = param_count(widths);
  return MlpNetwork(std::move(widths), std::vector<double>(n, 0.0));
}

void MlpNetwork::set_params(std::span<const double> params) {
  if (params.size() != params_.size()) throw InvalidArgument("parameter size mismatch");
  std::copy(params.begin(), params.end(), params_.begin());
}

std::vector<double> MlpNetwork::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != n_inputs()) throw InvalidArgument("input size mismatch");
  for (double v : input) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite network input");
  }
  // One- and two-input networks share the jet engine's arithmetic, so the
  // value channel of a jet equals this output bit for bit.
  if (n_inputs() <= 2) {
    const Point p{input[0], n_inputs() == 2 ? input[1] : 0.0};
    const auto jets = jet_forward(*this, p);
    std::vector<double> out(jets.size());
    for (std::size_t o = 0; o < jets.size(); ++o) out[o] = jets[o].v;
    return out;
  }
  Eigen::MatrixXd a = Eigen::Map<const Eigen::VectorXd>(input.data(), n_inputs());
  Eigen::MatrixXd z;
  for (int l = 0; l < n_layers(); ++l) {
    detail::affine(*this, l, a, z);
    if (l + 1 < n_layers()) {
      a = detail::tanh(z);
    } else {
      a = z;
    }
  }
  return std::vector<double>(a.data(), a.data() + a.size());
}

std::vector<double> MlpNetwork::forward(Point p) const {
  if (n_inputs() == 1) {
    const double in[1] = {p.x};
    return forward(std::span<const double>(in));
  }
  const double in[2] = {p.x, p.t};
  return forward(std::span<const double>(in));
}

}  // namespace pinn
