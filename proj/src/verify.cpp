#include "pinn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pinn/analysis.hpp"
#include "pinn/checkpoint.hpp"
#include "pinn/errors.hpp"
#include "pinn/loss.hpp"
#include "pinn/problems.hpp"
#include "pinn/random.hpp"
#include "pinn/schedule.hpp"

namespace pinn {

double richardson_first(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  const double d1 = d(h), d2 = d(h / 2), d3 = d(h / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

double richardson_second(const std::function<double(double)>& f, double x, double h) {
  const double f0 = f(x);
  auto d = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
  const double d1 = d(h), d2 = d(h / 2), d3 = d(h / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

double relative_error(double a, double b, double floor) {
  const double denom = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / denom;
}

double jet_fd_error(const MlpNetwork& net, Point p) {
  const auto jets = jet_forward(net, p);
  double worst = 0.0;
  for (int o = 0; o < net.n_outputs(); ++o) {
    auto along_x = [&](double x) { return net.forward(Point{x, p.t})[o]; };
    auto along_t = [&](double t) { return net.forward(Point{p.x, t})[o]; };
    const Jet2& j = jets[o];
    worst = std::max(worst, relative_error(j.v, net.forward(p)[o], 1e-3));
    worst = std::max(worst, relative_error(j.dx, richardson_first(along_x, p.x), 1e-3));
    worst = std::max(worst, relative_error(j.dxx, richardson_second(along_x, p.x), 1e-3));
    worst = std::max(worst, relative_error(j.dt, richardson_first(along_t, p.t), 1e-3));
    worst = std::max(worst, relative_error(j.dtt, richardson_second(along_t, p.t), 1e-3));
  }
  return worst;
}

LossFn mixed_jet_loss(int n_out, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> a(static_cast<std::size_t>(n_out * kJetComponents));
  std::vector<double> b(a.size());
  for (auto& x : a) x = rng.uniform(0.5, 1.5);
  for (auto& x : b) x = rng.uniform(-1.0, 1.0);
  return [a, b, n_out](const JetBatch& jets, JetBatch& adjoint) {
    const double inv_n = 1.0 / static_cast<double>(jets.n_points());
    double loss = 0.0;
    for (int c = 0; c < kJetComponents; ++c) {
      const auto& m = jets.component(c);
      auto& adj = adjoint.component(c);
      for (Eigen::Index p = 0; p < m.cols(); ++p) {
        for (int o = 0; o < n_out; ++o) {
          const auto k = static_cast<std::size_t>(o * kJetComponents + c);
          const double v = m(o, p);
          loss += (0.5 * a[k] * v * v + b[k] * v) * inv_n;
          adj(o, p) += (a[k] * v + b[k]) * inv_n;
        }
      }
    }
    return loss;
  };
}

double gradient_fd_error(const MlpNetwork& net, const LossFn& loss, std::span<const Point> points) {
  const LossGradient lg = loss_gradient(net, loss, points);
  MlpNetwork probe = net;
  auto eval = [&](std::size_t i, double value) {
    std::vector<double> params(net.params().begin(), net.params().end());
    params[i] = value;
    probe.set_params(params);
    const JetBatch jets = jet_forward(probe, points);
    JetBatch scratch(jets.n_outputs(), jets.n_points());
    scratch.set_zero();
    return loss(jets, scratch);
  };
  std::vector<double> fd(lg.grad.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    fd[i] = richardson_first([&](double v) { return eval(i, v); }, net.params()[i], 1e-3);
    scale = std::max(scale, std::abs(fd[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) worst = std::max(worst, relative_error(lg.grad[i], fd[i], 1e-6 * scale));
  return worst;
}

namespace {

CheckResult check(std::string suite, std::string name, double measured, double tol) {
  return {std::move(suite), std::move(name), measured <= tol, measured, tol};
}

std::vector<Point> random_points(Rng& rng, std::size_t n, double T) {
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95 * T)};
  return pts;
}

}  // namespace

std::vector<CheckResult> verify_oracle() {
  std::vector<CheckResult> out;
  const std::string suite = "oracle";

  // Series satisfies u_tt = u_xx + 1/2 (finite differences of the value).
  for (BarBc bc : {BarBc::pinned_pinned, BarBc::pinned_free}) {
    const std::string tag = bc == BarBc::pinned_pinned ? "pinned-pinned" : "pinned-free";
    double pde = 0.0;
    for (double x : {0.13, 0.37, 0.61, 0.84}) {
      for (double t : {0.3, 0.9, 1.7, 2.6}) {
        const double uxx = richardson_second([&](double xx) { return exact_bar(bc, xx, t); }, x, 2e-2);
        const double utt = richardson_second([&](double tt) { return exact_bar(bc, x, tt); }, t, 2e-2);
        pde = std::max(pde, std::abs(uxx + 0.5 - utt));
      }
    }
    out.push_back(check(suite, tag + " PDE residual (finite differences)", pde, 1e-4));

    double ic = 0.0, bcerr = 0.0;
    for (double x : linspace(0.0, 1.0, 21)) {
      ic = std::max(ic, std::abs(exact_bar(bc, x, 0.0)));
      ic = std::max(ic, std::abs(exact_bar_jet(bc, x, 0.0).dt));
    }
    for (double t : linspace(0.0, 8.0, 33)) {
      bcerr = std::max(bcerr, std::abs(exact_bar(bc, 0.0, t)));
      bcerr = std::max(bcerr, bc == BarBc::pinned_pinned ? std::abs(exact_bar(bc, 1.0, t))
                                                         : std::abs(exact_bar_jet(bc, 1.0, t).dx));
    }
    out.push_back(check(suite, tag + " initial conditions", ic, 1e-6));
    out.push_back(check(suite, tag + " boundary conditions", bcerr, 1e-6));
  }

  auto history = [](BarBc bc, double x, double T) {
    const auto ts = linspace(0.0, T, static_cast<std::size_t>(std::llround(T / 0.01)) + 1);
    std::vector<double> v;
    for (double t : ts) v.push_back(exact_bar(bc, x, t));
    return TimeSeries(ts, v);
  };
  const auto pp = find_peaks(history(BarBc::pinned_pinned, 0.5, 4.0));
  double pp_err = pp.maxima.size() == 2 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(2, pp.maxima.size()); ++i) {
    pp_err = std::max(pp_err, std::abs(pp.maxima[i].value - 0.125));
    if (std::abs(pp.maxima[i].time - (1.0 + 2.0 * i)) > 0.01 + 1e-12) pp_err = 1.0;
  }
  out.push_back(check(suite, "pinned-pinned midspan peaks 0.125 at t = 1, 3", pp_err, 1e-3));

  const auto pf = find_peaks(history(BarBc::pinned_free, 1.0, 8.0));
  double pf_err = pf.maxima.size() == 2 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(2, pf.maxima.size()); ++i) {
    pf_err = std::max(pf_err, std::abs(pf.maxima[i].value - 0.5));
    if (std::abs(pf.maxima[i].time - (2.0 + 4.0 * i)) > 0.01 + 1e-12) pf_err = 1.0;
  }
  out.push_back(check(suite, "pinned-free free-end peaks 0.5 at t = 2, 6", pf_err, 2e-3));

  // The static displacement zeroes every bar Form's residuals.
  for (FormId form : {FormId::bar_f1, FormId::bar_f2a, FormId::bar_f2b, FormId::bar_f3}) {
    double worst = 0.0;
    for (double x : {0.1, 0.5, 0.9}) {
      const double u = x * (1.0 - x) / 4.0, ux = (1.0 - 2.0 * x) / 4.0;
      std::vector<Jet2> j;
      j.push_back({u, ux, 0.0, -0.5, 0.0});
      if (form == FormId::bar_f2a) j.push_back({});
      if (form == FormId::bar_f2b || form == FormId::bar_f3) j.push_back({ux, -0.5, 0.0, 0.0, 0.0});
      if (form == FormId::bar_f3) j.push_back({});
      for (double r : residuals(form, j, 1.0, 0.5, 0.0)) worst = std::max(worst, std::abs(r));
    }
    out.push_back(check(suite, std::string(to_string(form)) + " static substitution", worst, 1e-12));
  }
  return out;
}

std::vector<CheckResult> verify_gradients() {
  std::vector<CheckResult> out;
  const std::string suite = "gradient";
  Rng rng(2024);
  const std::vector<std::vector<int>> shapes{{2, 4, 1}, {2, 6, 6, 2}, {2, 5, 5, 5, 3}, {1, 8, 1}, {2, 10, 10, 1}};
  double jet_err = 0.0, grad_err = 0.0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto net = MlpNetwork::initialized(shapes[k], {InitKind::glorot_uniform, 100 + k});
    for (const Point& p : random_points(rng, 4, 1.0)) jet_err = std::max(jet_err, jet_fd_error(net, p));
    const auto pts = random_points(rng, 7, 1.0);
    grad_err = std::max(grad_err, gradient_fd_error(net, mixed_jet_loss(net.n_outputs(), k), pts));
  }
  out.push_back(check(suite, "jet components vs Richardson differences", jet_err, 1e-6));
  out.push_back(check(suite, "parameter gradient vs central differences", grad_err, 1e-5));

  // The full PINN loss with a barrier, through the same reverse sweep.
  const Grid grid = random_grid(4, 1.0, 7);
  for (FormId form : {FormId::bar_f1, FormId::bar_f2a, FormId::bar_f3, FormId::rod_f4}) {
    const ProblemForm pb = make_problem(is_bar(form) ? "bar-pinned-free" : "rod-cantilever", form, {1.0});
    const PinnLoss loss(pb, grid);
    const BarrierSpec barrier{BarrierShape::log, BarrierBasis::acceleration, 0.0, 1e-3, std::nullopt};
    const LossFn fn = [&](const JetBatch& jets, JetBatch& adj) { return loss.evaluate(jets, &adj, &barrier).total; };
    const auto net = MlpNetwork::initialized({2, 6, 6, pb.n_out()}, {InitKind::glorot_uniform, 5});
    out.push_back(check(suite, std::string(to_string(form)) + " PINN loss gradient",
                        gradient_fd_error(net, fn, loss.points()), 1e-5));
  }
  return out;
}

std::vector<CheckResult> verify_schedule() {
  std::vector<CheckResult> out;
  const std::string suite = "schedule";
  Schedule lrs4;
  lrs4.kind = ScheduleKind::lrs4_piecewise;
  lrs4.init_lr = 0.003;
  lrs4.cycle_steps = {100, 100, 100, 100, 100, 100};
  lrs4.factors = {0.9, 0.8, 0.7, 1.0, 1.0};
  const double expected[] = {0.003, 2.7e-3, 2.16e-3, 1.512e-3, 1.512e-3, 1.512e-3};
  double err4 = 0.0;
  for (int c = 0; c < 6; ++c) err4 = std::max(err4, relative_error(lr_at(lrs4, 100 * c + 50), expected[c]));
  out.push_back(check(suite, "LRS4 piecewise sequence", err4, 1e-12));

  Schedule lrs1;
  lrs1.kind = ScheduleKind::lrs1_ca;
  lrs1.init_lr = 0.01;
  double err1 = 0.0;
  std::int64_t start = 0;
  for (auto n : lrs1.cycle_steps) {
    err1 = std::max(err1, std::abs(lr_at(lrs1, start) - lrs1.init_lr));
    err1 = std::max(err1, std::abs(lr_at(lrs1, start + lrs1.period_steps) / lr_at(lrs1, start) - 0.9));
    start += n;
  }
  out.push_back(check(suite, "LRS1 reset and 0.9 per first period", err1, 1e-12));
  return out;
}

std::vector<CheckResult> verify_checkpoint(const std::optional<std::filesystem::path>& file) {
  std::vector<CheckResult> out;
  const std::string suite = "checkpoint";
  Checkpoint ck;
  ck.widths = {2, 8, 8, 2};
  ck.seed = 9;
  ck.step = 1234;
  ck.params = init_params(ck.widths, {InitKind::he_uniform, 9});
  auto bytes = encode_checkpoint(ck);
  const Checkpoint back = decode_checkpoint(bytes);
  out.push_back(check(suite, "round trip", back.params == ck.params && back.widths == ck.widths ? 0.0 : 1.0, 0.0));
  bytes[bytes.size() / 2] ^= 0x40;
  bool caught = false;
  try {
    decode_checkpoint(bytes);
  } catch (const CheckpointError&) {
    caught = true;
  }
  out.push_back(check(suite, "corruption detected", caught ? 0.0 : 1.0, 0.0));
  if (file) {
    bool loaded = true;
    try {
      load_checkpoint(*file);
    } catch (const CheckpointError&) {
      loaded = false;
    }
    out.push_back(check(suite, "load " + file->string(), loaded ? 0.0 : 1.0, 0.0));
  }
  return out;
}

bool print_report(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e (tol %.1e)", r.measured, r.tolerance);
    out << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << "  " << buf << "\n";
    all = all && r.passed;
  }
  return all;
}

}  // namespace pinn
