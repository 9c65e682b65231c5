#include "pinn/jets.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "kernels.hpp"
#include "pinn/errors.hpp"

namespace pinn {

JetBatch::JetBatch(int n_out, std::size_t n_points) : n_out_(n_out), n_points_(n_points) {
  for (auto& m : comp_) m = Eigen::MatrixXd::Zero(n_out, static_cast<Eigen::Index>(n_points));
}

Jet2 JetBatch::at(std::size_t point, int output) const {
  const auto j = static_cast<Eigen::Index>(point);
  return {comp_[0](output, j), comp_[1](output, j), comp_[2](output, j), comp_[3](output, j),
          comp_[4](output, j)};
}

void JetBatch::set(std::size_t point, int output, const Jet2& jet) {
  const auto j = static_cast<Eigen::Index>(point);
  comp_[0](output, j) = jet.v;
  comp_[1](output, j) = jet.dx;
  comp_[2](output, j) = jet.dt;
  comp_[3](output, j) = jet.dxx;
  comp_[4](output, j) = jet.dtt;
}

std::vector<Jet2> JetBatch::point(std::size_t point) const {
  std::vector<Jet2> out(static_cast<std::size_t>(n_out_));
  for (int o = 0; o < n_out_; ++o) out[o] = at(point, o);
  return out;
}

void JetBatch::set_zero() {
  for (auto& m : comp_) m.setZero();
}

namespace {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;

// One block's jets are stored channel-stacked: a (width x 5n) matrix whose
// column range [c n, (c+1) n) holds jet component c. Each layer then costs a
// single GEMM forward and two backward.

// Activations and tanh derivatives of one block, kept for the reverse sweep.
struct LayerTape {
  MatrixXd input;  // stacked jets entering the layer
  // Hidden layers only: stacked pre-activation and tanh derivatives.
  MatrixXd z;
  ArrayXXd s, s1, s2;
};

struct BlockTape {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<LayerTape> layers;
  MatrixXd output;  // stacked output jets
};

Eigen::Index block_cols(const BlockTape& tape) { return static_cast<Eigen::Index>(tape.end - tape.begin); }

void forward_block(const MlpNetwork& net, std::span<const Point> points, BlockTape& tape) {
  const Eigen::Index n = block_cols(tape);
  const int n_in = net.n_inputs();
  const int L = net.n_layers();
  tape.layers.resize(static_cast<std::size_t>(L));

  MatrixXd& in0 = tape.layers[0].input;
  in0.setZero(n_in, kJetComponents * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Point& p = points[tape.begin + static_cast<std::size_t>(j)];
    in0(0, j) = p.x;
    in0(0, n + j) = 1.0;
    if (n_in > 1) {
      in0(1, j) = p.t;
      in0(1, 2 * n + j) = 1.0;
    }
  }

  for (int l = 0; l < L; ++l) {
    LayerTape& lt = tape.layers[l];
    MatrixXd z;
    detail::linear(net, l, lt.input, z);
    z.leftCols(n).colwise() += detail::layer_bias(net, l);

    if (l + 1 == L) {
      tape.output = std::move(z);
      break;
    }

    lt.s = detail::tanh(z.leftCols(n));
    lt.s1 = 1.0 - lt.s.square();
    lt.s2 = -2.0 * lt.s * lt.s1;

    const auto zx = z.middleCols(n, n).array();
    const auto zt = z.middleCols(2 * n, n).array();
    const auto zxx = z.middleCols(3 * n, n).array();
    const auto ztt = z.middleCols(4 * n, n).array();
    MatrixXd& next = tape.layers[l + 1].input;
    next.resize(z.rows(), kJetComponents * n);
    next.leftCols(n) = lt.s.matrix();
    next.middleCols(n, n) = (lt.s1 * zx).matrix();
    next.middleCols(2 * n, n) = (lt.s1 * zt).matrix();
    next.middleCols(3 * n, n) = (lt.s2 * zx.square() + lt.s1 * zxx).matrix();
    next.middleCols(4 * n, n) = (lt.s2 * zt.square() + lt.s1 * ztt).matrix();
    lt.z = std::move(z);
  }
}

// Reverse sweep of one block. `adj` holds dLoss/d(output jets), stacked like
// the tape; the block's parameter gradient is written into `grad`. Eigen picks
// its reduction order from the destination's alignment, so `grad` is an
// Eigen vector (fixed alignment) rather than heap memory of varying alignment.
void backward_block(const MlpNetwork& net, const BlockTape& tape, MatrixXd adj, Eigen::VectorXd& grad) {
  grad.setZero(static_cast<Eigen::Index>(net.params().size()));
  const Eigen::Index n = block_cols(tape);
  const int L = net.n_layers();
  const auto& w = net.widths();
  MatrixXd ga_m;
  for (int l = L - 1; l >= 0; --l) {
    const LayerTape& lt = tape.layers[l];
    detail::Weights gw(grad.data() + net.weight_offset(l), w[l + 1], w[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + net.bias_offset(l), w[l + 1]);
    gw.noalias() = adj * lt.input.transpose();
    gb = adj.leftCols(n).rowwise().sum();
    if (l == 0) break;

    ga_m.noalias() = detail::layer_weights(net, l).transpose() * adj;
    const auto ga = [&](int c) { return ga_m.middleCols(c * n, n).array(); };

    // Undo the activation of layer l-1.
    const LayerTape& prev = tape.layers[l - 1];
    const ArrayXXd& s = prev.s;
    const ArrayXXd& s1 = prev.s1;
    const ArrayXXd& s2 = prev.s2;
    const ArrayXXd s3 = -2.0 * s1.square() - 2.0 * s * s2;
    const auto zx = prev.z.middleCols(n, n).array();
    const auto zt = prev.z.middleCols(2 * n, n).array();
    const auto zxx = prev.z.middleCols(3 * n, n).array();
    const auto ztt = prev.z.middleCols(4 * n, n).array();

    adj.resize(w[l], kJetComponents * n);
    adj.leftCols(n) = (ga(0) * s1 + ga(1) * s2 * zx + ga(2) * s2 * zt + ga(3) * (s3 * zx.square() + s2 * zxx) +
                       ga(4) * (s3 * zt.square() + s2 * ztt))
                          .matrix();
    adj.middleCols(n, n) = (ga(1) * s1 + 2.0 * ga(3) * s2 * zx).matrix();
    adj.middleCols(2 * n, n) = (ga(2) * s1 + 2.0 * ga(4) * s2 * zt).matrix();
    adj.middleCols(3 * n, n) = (ga(3) * s1).matrix();
    adj.middleCols(4 * n, n) = (ga(4) * s1).matrix();
  }
}

std::vector<std::pair<std::size_t, std::size_t>> make_blocks(std::size_t n, std::size_t block_size) {
  if (block_size == 0) throw InvalidArgument("block size must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t b = 0; b < n; b += block_size) blocks.emplace_back(b, std::min(n, b + block_size));
  return blocks;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t n_threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<BlockTape> forward_all(const MlpNetwork& net, std::span<const Point> points, const EvalOptions& opts) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].t)) {
      throw InvalidArgument("non-finite collocation point at index " + std::to_string(i));
    }
  }
  const auto ranges = make_blocks(points.size(), opts.block_size);
  std::vector<BlockTape> tapes(ranges.size());
  for (std::size_t b = 0; b < ranges.size(); ++b) {
    tapes[b].begin = ranges[b].first;
    tapes[b].end = ranges[b].second;
  }
  parallel_for(tapes.size(), opts.workers, [&](std::size_t b) { forward_block(net, points, tapes[b]); });
  return tapes;
}

JetBatch gather(const MlpNetwork& net, const std::vector<BlockTape>& tapes, std::size_t n_points) {
  JetBatch batch(net.n_outputs(), n_points);
  for (const auto& tape : tapes) {
    const auto begin = static_cast<Eigen::Index>(tape.begin);
    const Eigen::Index n = block_cols(tape);
    for (int c = 0; c < kJetComponents; ++c) batch.component(c).middleCols(begin, n) = tape.output.middleCols(c * n, n);
  }
  return batch;
}

long first_nonfinite_point(const JetBatch& batch) {
  for (std::size_t j = 0; j < batch.n_points(); ++j) {
    for (int c = 0; c < kJetComponents; ++c) {
      if (!batch.component(c).col(static_cast<Eigen::Index>(j)).allFinite()) return static_cast<long>(j);
    }
  }
  return -1;
}

}  // namespace

std::vector<Jet2> jet_forward(const MlpNetwork& net, Point point) {
  const Point pts[1] = {point};
  return jet_forward(net, std::span<const Point>(pts)).point(0);
}

JetBatch jet_forward(const MlpNetwork& net, std::span<const Point> points, const EvalOptions& opts) {
  const auto tapes = forward_all(net, points, opts);
  return gather(net, tapes, points.size());
}

LossGradient loss_gradient(const MlpNetwork& net, const LossFn& loss_fn, std::span<const Point> points,
                           const EvalOptions& opts) {
  const auto tapes = forward_all(net, points, opts);
  const JetBatch jets = gather(net, tapes, points.size());
  JetBatch adjoint(net.n_outputs(), points.size());

  LossGradient out;
  out.loss = loss_fn(jets, adjoint);
  if (!std::isfinite(out.loss)) {
    long idx = first_nonfinite_point(jets);
    if (idx < 0) idx = first_nonfinite_point(adjoint);
    throw DivergedError("non-finite loss", idx);
  }
  if (const long idx = first_nonfinite_point(adjoint); idx >= 0) {
    throw DivergedError("non-finite loss adjoint", idx);
  }

  std::vector<Eigen::VectorXd> block_grads(tapes.size());
  parallel_for(tapes.size(), opts.workers, [&](std::size_t b) {
    const auto begin = static_cast<Eigen::Index>(tapes[b].begin);
    const Eigen::Index n = block_cols(tapes[b]);
    Eigen::MatrixXd adj(net.n_outputs(), kJetComponents * n);
    for (int c = 0; c < kJetComponents; ++c) adj.middleCols(c * n, n) = adjoint.component(c).middleCols(begin, n);
    backward_block(net, tapes[b], std::move(adj), block_grads[b]);
  });

  out.grad.assign(net.params().size(), 0.0);
  for (const auto& g : block_grads) {
    for (std::size_t i = 0; i < g.size(); ++i) out.grad[i] += g[i];
  }
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    if (!std::isfinite(out.grad[i])) throw DivergedError("non-finite gradient component " + std::to_string(i));
  }
  return out;
}

}  // namespace pinn
