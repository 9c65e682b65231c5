#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "../../src/kernels.hpp"
#include "pinn/errors.hpp"
#include "pinn/jets.hpp"
#include "pinn/verify.hpp"

using namespace pinn;

namespace {

std::vector<Point> random_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ut(0.0, 4.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({ux(rng), ut(rng)});
  return pts;
}

double out0(const MlpNetwork& net, double x, double t) { return net.forward(Point{x, t})[0]; }

}  // namespace

TEST_CASE("tanh kernel agrees with std::tanh") {
  Eigen::MatrixXd z(1, 4001);
  for (int i = 0; i < z.cols(); ++i) z(0, i) = -20.0 + 0.01 * i;
  z(0, 2000) = 0.0;
  const Eigen::ArrayXXd t = detail::tanh(z);
  double worst = 0.0;
  for (int i = 0; i < z.cols(); ++i) {
    const double ref = std::tanh(z(0, i));
    worst = std::max(worst, std::abs(t(0, i) - ref) / std::max(std::abs(ref), 1e-300));
  }
  CHECK(worst < 1e-14);
  CHECK(t(0, 2000) == 0.0);
}

TEST_CASE("single tanh unit: jets equal the analytic derivatives") {
  const MlpNetwork net({1, 1, 1}, {1.0, 0.0, 1.0, 0.0});
  const double x = 0.3;
  const double th = std::tanh(x);
  const auto j = jet_forward(net, Point{x, 1.0})[0];
  CHECK(j.v == doctest::Approx(th).epsilon(1e-15));
  CHECK(j.dx == doctest::Approx(1.0 - th * th).epsilon(1e-15));
  CHECK(j.dxx == doctest::Approx(-2.0 * th * (1.0 - th * th)).epsilon(1e-14));
  CHECK(j.dt == 0.0);
  CHECK(j.dtt == 0.0);
}

TEST_CASE("[2,1,1] unit net: dx and dxx match central differences") {
  const MlpNetwork net({2, 1, 1}, {1.0, 1.0, 0.0, 1.0, 0.0});
  const Point p{0.4, 0.2};
  const auto j = jet_forward(net, p)[0];
  const double h1 = 1e-4, h2 = 1e-3;
  const double dx = (out0(net, p.x + h1, p.t) - out0(net, p.x - h1, p.t)) / (2 * h1);
  const double dxx =
      (out0(net, p.x + h2, p.t) - 2 * out0(net, p.x, p.t) + out0(net, p.x - h2, p.t)) / (h2 * h2);
  CHECK(relative_error(j.dx, dx) < 1e-6);
  CHECK(relative_error(j.dxx, dxx) < 1e-6);
  CHECK(j.dt == doctest::Approx(j.dx).epsilon(1e-15));
}

TEST_CASE("zero network has all-zero jets") {
  const auto net = MlpNetwork::zeros({2, 8, 8, 3});
  const auto batch = jet_forward(net, random_points(10, 1));
  for (int c = 0; c < kJetComponents; ++c) CHECK(batch.component(c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jets of random networks match Richardson differences") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int hidden = 1 + trial % 3;
    std::vector<int> widths{2};
    for (int h = 0; h < hidden; ++h) widths.push_back(4 + 4 * (trial % 4));
    widths.push_back(1 + trial % 3);
    const auto net = MlpNetwork::initialized(widths, {InitKind::glorot_uniform, rng()});
    for (const auto& p : random_points(5, static_cast<unsigned>(trial))) CHECK(jet_fd_error(net, p) < 1e-6);
  }
}

TEST_CASE("value channel is bit-identical to the plain forward pass") {
  const auto net = MlpNetwork::initialized({2, 16, 16, 2}, {InitKind::he_uniform, 9});
  const auto pts = random_points(300, 2);
  const auto batch = jet_forward(net, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto plain = net.forward(pts[i]);
    for (int o = 0; o < 2; ++o) CHECK(batch.at(i, o).v == plain[o]);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto net = MlpNetwork::initialized({2, 16, 16, 2}, {InitKind::he_uniform, 4});
  const auto pts = random_points(700, 3);
  const auto loss = mixed_jet_loss(2, 17);
  const auto a = loss_gradient(net, loss, pts, {1, 64});
  const auto b = loss_gradient(net, loss, pts, {4, 64});
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
  const auto ja = jet_forward(net, pts, {1, 64});
  const auto jb = jet_forward(net, pts, {3, 64});
  for (int c = 0; c < kJetComponents; ++c) CHECK(ja.component(c) == jb.component(c));
}

TEST_CASE("loss gradient") {
  SUBCASE("zero loss gives zero gradient") {
    const auto net = MlpNetwork::initialized({2, 6, 1}, {InitKind::he_uniform, 1});
    const auto g = loss_gradient(net, [](const JetBatch&, JetBatch&) { return 0.0; }, random_points(4, 1));
    CHECK(g.loss == 0.0);
    for (double v : g.grad) CHECK(v == 0.0);
  }
  SUBCASE("loss = v has unit gradient in the output bias") {
    const auto net = MlpNetwork::initialized({2, 5, 1}, {InitKind::he_uniform, 2});
    const auto g = loss_gradient(
        net,
        [](const JetBatch& j, JetBatch& adj) {
          adj.component(JetComponent::v)(0, 0) = 1.0;
          return j.at(0, 0).v;
        },
        random_points(1, 4));
    CHECK(g.grad[net.bias_offset(1)] == 1.0);
  }
  SUBCASE("mean of dxx^2 over five points matches central differences") {
    const auto net = MlpNetwork::initialized({2, 4, 4, 1}, {InitKind::glorot_uniform, 6});  // 37 params
    REQUIRE(net.params().size() <= 50);
    const auto pts = random_points(5, 8);
    const LossFn loss = [](const JetBatch& j, JetBatch& adj) {
      const auto& dxx = j.component(JetComponent::dxx);
      const double n = static_cast<double>(j.n_points());
      adj.component(JetComponent::dxx) = 2.0 * dxx / n;
      return dxx.squaredNorm() / n;
    };
    const auto g = loss_gradient(net, loss, pts);
    std::vector<double> p(net.params().begin(), net.params().end());
    const double h = 1e-6;
    double grad_max = 0.0;
    for (double v : g.grad) grad_max = std::max(grad_max, std::abs(v));
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto eval = [&](double delta) {
        auto q = p;
        q[i] += delta;
        MlpNetwork m(net.widths(), q);
        JetBatch adj(1, pts.size());
        return loss(jet_forward(m, pts), adj);
      };
      const double fd = (eval(h) - eval(-h)) / (2 * h);
      CHECK(relative_error(g.grad[i], fd, 1e-3 * grad_max) < 1e-5);
    }
  }
  SUBCASE("all five jet channels") {
    const auto net = MlpNetwork::initialized({2, 6, 5, 2}, {InitKind::glorot_uniform, 12});
    CHECK(gradient_fd_error(net, mixed_jet_loss(2, 3), random_points(7, 9)) < 1e-5);
  }
}

TEST_CASE("non-finite loss raises DivergedError with the point index") {
  const auto net = MlpNetwork::initialized({2, 4, 1}, {InitKind::he_uniform, 1});
  const auto pts = random_points(6, 1);
  const LossFn bad = [](const JetBatch&, JetBatch& adj) {
    adj.component(0)(0, 3) = std::numeric_limits<double>::quiet_NaN();
    return 1.0;
  };
  try {
    loss_gradient(net, bad, pts);
    FAIL("expected DivergedError");
  } catch (const DivergedError& e) {
    CHECK(e.point_index() == 3);
  }
  const LossFn inf = [](const JetBatch&, JetBatch&) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(loss_gradient(net, inf, pts), DivergedError);
}

TEST_CASE("non-finite collocation points are rejected") {
  const auto net = MlpNetwork::zeros({2, 3, 1});
  std::vector<Point> pts{{0.1, 0.1}, {std::nan(""), 0.0}};
  CHECK_THROWS_AS(jet_forward(net, pts), InvalidArgument);
}
