#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pinn/analysis.hpp"
#include "pinn/barriers.hpp"
#include "pinn/errors.hpp"
#include "pinn/sampling.hpp"
#include "pinn/verify.hpp"

using namespace pinn;

namespace {

JetBatch random_jets(int n_out, std::size_t n, unsigned seed, int ext_output = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  JetBatch j(n_out, n);
  for (int c = 0; c < kJetComponents; ++c)
    for (int o = 0; o < n_out; ++o)
      for (std::size_t p = 0; p < n; ++p) j.component(c)(o, static_cast<Eigen::Index>(p)) = u(rng);
  if (ext_output >= 0)
    for (std::size_t p = 0; p < n; ++p) j.component(0)(ext_output, static_cast<Eigen::Index>(p)) += 2.5;
  return j;
}

std::vector<Point> random_points(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), 4.0 * u(rng)});
  return pts;
}

}  // namespace

TEST_CASE("barrier shapes") {
  CHECK(barrier_value(BarrierShape::inverse, 1.5, 0.5) == 1.0);
  CHECK(barrier_value(BarrierShape::log, 1.7, 0.7) == 0.0);
  CHECK_THROWS_AS(barrier_value(BarrierShape::inverse, 0.5, 0.5), InsideBufferError);
  CHECK_THROWS_AS(barrier_value(BarrierShape::inverse, 0.5 + 1e-13, 0.5), InsideBufferError);
  CHECK_THROWS_AS(barrier_value(BarrierShape::log, 0.1, 0.5), InsideBufferError);
  CHECK_NOTHROW(barrier_value(BarrierShape::inverse, 0.5 + 1e-9, 0.5));
  for (auto shape : {BarrierShape::inverse, BarrierShape::log}) {
    double prev = barrier_value(shape, 1.001, 1.0);
    for (double m = 1.01; m < 10.0; m *= 1.1) {
      const double v = barrier_value(shape, m, 1.0);
      CHECK(v < prev);
      prev = v;
      const double fd = richardson_first([&](double x) { return barrier_value(shape, x, 1.0); }, m, 1e-4);
      CHECK(barrier_slope(shape, m, 1.0) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("augment_loss") {
  BarrierSpec spec;
  spec.weight = 0.0;
  CHECK(augment_loss(3.0, spec, 5.0) == 3.0);
  spec.weight = 1.0;
  spec.depth = 1.0;
  CHECK(augment_loss(3.0, spec, 5.0) == 3.25);
  spec.off_at = 10;
  CHECK(spec.active_at(9));
  CHECK_FALSE(spec.active_at(10));
}

TEST_CASE("names parse") {
  CHECK(parse_barrier_shape("inv") == BarrierShape::inverse);
  CHECK(parse_barrier_shape("l") == BarrierShape::log);
  CHECK(parse_barrier_basis("a") == BarrierBasis::acceleration);
  CHECK(parse_barrier_basis("static_operator") == BarrierBasis::static_operator);
  CHECK(parse_barrier_basis(to_string(BarrierBasis::static_solution)) == BarrierBasis::static_solution);
  CHECK_THROWS_AS(parse_barrier_basis("velocity"), InvalidArgument);
}

TEST_CASE("acceleration margin example: pdot = (3, 4)") {
  const auto pb = make_problem("rod-cantilever", FormId::rod_f3);
  JetBatch j(9, 1);
  j.component(JetComponent::dt)(rod_out::pX, 0) = 3.0;
  j.component(JetComponent::dt)(rod_out::pY, 0) = 4.0;
  const std::vector<Point> pts{{0.5, 1.0}};
  const MarginDomain dom{&pb, pts, 0, 1};
  const double m = margin(BarrierBasis::acceleration, dom, j);
  CHECK(m == 5.0);
  CHECK(barrier_value(BarrierShape::inverse, m, 1.0) == 0.25);
}

TEST_CASE("static solution margin vanishes on the static state") {
  const auto pb = make_problem("bar-pinned-pinned", FormId::bar_f1);
  const auto pts = random_points(20, 3);
  JetBatch j(1, pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) j.component(0)(0, static_cast<Eigen::Index>(p)) = pb.static_solution(pts[p].x);
  const MarginDomain dom{&pb, pts, 0, pts.size()};
  const double m = margin(BarrierBasis::static_solution, dom, j);
  CHECK(m == 0.0);
  CHECK_THROWS_AS(barrier_value(BarrierShape::log, m, 1e-3), InsideBufferError);
}

TEST_CASE("acceleration margin of the modal solution stays positive over a period") {
  const auto pb = make_problem("bar-pinned-pinned", FormId::bar_f1);
  // Sliding windows of half a period on a regular lattice.
  for (double t0 = 0.0; t0 < 2.0; t0 += 0.25) {
    std::vector<Point> pts;
    for (int i = 1; i < 20; ++i)
      for (int k = 0; k <= 20; ++k) pts.push_back({i / 20.0, t0 + k * 0.05});
    JetBatch j(1, pts.size());
    double sum = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const Jet2 e = exact_bar_jet(BarBc::pinned_pinned, pts[p].x, pts[p].t);
      j.set(p, 0, e);
      sum += e.dtt * e.dtt;
    }
    const MarginDomain dom{&pb, pts, 0, pts.size()};
    const double m = margin(BarrierBasis::acceleration, dom, j);
    CHECK(m == doctest::Approx(std::sqrt(sum / pts.size())).epsilon(1e-12));
    CHECK(m > 0.2);
  }
}

TEST_CASE("margin adjoints match finite differences") {
  struct Case {
    const char* preset;
    FormId form;
    BarrierBasis basis;
    int ext;
  };
  const Case cases[] = {
      {"bar-pinned-pinned", FormId::bar_f1, BarrierBasis::acceleration, -1},
      {"bar-pinned-free", FormId::bar_f2a, BarrierBasis::acceleration, -1},
      {"bar-pinned-pinned", FormId::bar_f3, BarrierBasis::static_solution, -1},
      {"bar-pinned-pinned", FormId::bar_f2b, BarrierBasis::static_operator, -1},
      {"rod-cantilever", FormId::rod_f3, BarrierBasis::acceleration, -1},
      {"rod-cantilever", FormId::rod_f3, BarrierBasis::static_operator, rod_out::ext},
      {"rod-simply-supported", FormId::rod_f4, BarrierBasis::static_operator, -1},
  };
  for (const auto& c : cases) {
    CAPTURE(c.preset);
    CAPTURE(to_string(c.form));
    CAPTURE(to_string(c.basis));
    const auto pb = make_problem(c.preset, c.form);
    const auto pts = random_points(6, 5);
    const auto jets = random_jets(pb.n_out(), pts.size(), 7, c.ext);
    const MarginDomain dom{&pb, pts, 1, 5};
    JetBatch adj(pb.n_out(), pts.size());
    const double scale = 0.7;
    margin(c.basis, dom, jets, &adj, scale);
    for (int comp = 0; comp < kJetComponents; ++comp) {
      for (int o = 0; o < pb.n_out(); ++o) {
        for (Eigen::Index p = 0; p < 6; ++p) {
          auto f = [&](double v) {
            JetBatch q = jets;
            q.component(comp)(o, p) = v;
            return scale * margin(c.basis, dom, q);
          };
          const double fd = richardson_first(f, jets.component(comp)(o, p), 1e-3);
          CHECK(adj.component(comp)(o, p) == doctest::Approx(fd).epsilon(1e-8).scale(1e-8));
        }
      }
    }
  }
}

TEST_CASE("detect_static") {
  SUBCASE("constructed plateau") {
    std::vector<double> t, v;
    for (int i = 0; i <= 400; ++i) {
      t.push_back(i * 0.01);
      v.push_back(t.back() < 0.2 ? 0.0 : 0.25);
    }
    const auto d = detect_static(TimeSeries(t, v));
    CHECK(d.is_static);
    CHECK(d.onset_time == doctest::Approx(0.2).epsilon(0.06));
  }
  SUBCASE("pure sine") {
    std::vector<double> t, v;
    for (int i = 0; i <= 1000; ++i) {
      t.push_back(i * 4 * std::numbers::pi / 1000);
      v.push_back(std::sin(t.back()));
    }
    CHECK_FALSE(detect_static(TimeSeries(t, v)).is_static);
  }
  SUBCASE("exact pinned-pinned midspan history") {
    std::vector<double> t, v;
    for (int i = 0; i <= 400; ++i) {
      t.push_back(i * 0.01);
      v.push_back(exact_bar(BarBc::pinned_pinned, 0.5, t.back()));
    }
    CHECK_FALSE(detect_static(TimeSeries(t, v)).is_static);
  }
  SUBCASE("degenerate series") {
    CHECK_FALSE(detect_static(TimeSeries({0.0, 1.0}, {0.0, 1.0})).is_static);
    CHECK_FALSE(detect_static(TimeSeries({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0})).is_static);
  }
}
