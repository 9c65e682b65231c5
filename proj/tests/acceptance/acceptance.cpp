// Acceptance criteria: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Arguments select criteria by number; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pinn/analysis.hpp"
#include "pinn/barriers.hpp"
#include "pinn/errors.hpp"
#include "pinn/loss.hpp"
#include "pinn/random.hpp"
#include "pinn/schedule.hpp"
#include "pinn/training.hpp"
#include "pinn/verify.hpp"

using namespace pinn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<Point> random_points(Rng& rng, int n, double T) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(), T * rng.uniform()});
  return pts;
}

// -- 1 ----------------------------------------------------------------------

Outcome derivative_exactness() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int hidden = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<int> widths{2};
    for (int h = 0; h < hidden; ++h) widths.push_back(2 + static_cast<int>(rng.next_u64() % 15));
    widths.push_back(1 + static_cast<int>(rng.next_u64() % 3));
    const auto net = MlpNetwork::initialized(widths, {InitKind::glorot_uniform, rng.next_u64()});
    for (const auto& p : random_points(rng, 20, 4.0)) worst = std::max(worst, jet_fd_error(net, p));
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-6 && dt < 5.0, fmt("max rel err %.2e (< 1e-6), %.2f s (< 5 s)", worst, dt)};
}

// -- 2 ----------------------------------------------------------------------

Outcome gradient_exactness() {
  const auto t0 = Clock::now();
  Rng rng(7);
  double worst = 0.0;
  std::size_t largest = 0;
  for (int k = 0; k < 10; ++k) {
    std::vector<int> widths{2};
    const int hidden = 1 + k % 3;
    for (int h = 0; h < hidden; ++h) widths.push_back(3 + static_cast<int>(rng.next_u64() % 6));
    widths.push_back(1 + k % 3);
    if (param_count(widths) > 200) continue;
    largest = std::max(largest, param_count(widths));
    const auto net = MlpNetwork::initialized(widths, {InitKind::glorot_uniform, rng.next_u64()});
    const auto pts = random_points(rng, 8, 4.0);
    worst = std::max(worst, gradient_fd_error(net, mixed_jet_loss(net.n_outputs(), rng.next_u64()), pts));
  }
  const double dt = seconds_since(t0);
  return {worst < 1e-5 && dt < 30.0,
          fmt("max rel err %.2e (< 1e-5) over nets up to %zu params, %.2f s (< 30 s)", worst, largest, dt)};
}

// -- 3 ----------------------------------------------------------------------

Outcome parameter_counts() {
  const std::vector<std::pair<std::vector<int>, std::size_t>> cases{
      {{2, 64, 64, 64, 64, 1}, 12737}, {{2, 64, 64, 64, 64, 2}, 12802}, {{2, 64, 64, 64, 64, 3}, 12867},
      {{2, 64, 64, 2}, 4482},          {{2, 32, 32, 2}, 1218},          {{2, 32, 32, 3}, 1251},
      {{2, 32, 32, 1}, 1185},          {{2, 16, 16, 1}, 337},           {{2, 8, 8, 1}, 105}};
  std::string bad;
  for (const auto& [w, n] : cases) {
    if (param_count(w) != n) bad += " " + std::to_string(n) + "->" + std::to_string(param_count(w));
  }
  return {bad.empty(), bad.empty() ? "all 9 counts exact" : "mismatch:" + bad};
}

// -- 4 ----------------------------------------------------------------------

Outcome oracle_fidelity() {
  const auto t0 = Clock::now();
  std::vector<std::string> problems;
  auto history = [](BarBc bc, double x, double T) {
    std::vector<double> t, v;
    for (int i = 0; i <= static_cast<int>(std::lround(T / 0.01)); ++i) {
      t.push_back(i * 0.01);
      v.push_back(exact_bar(bc, x, t.back(), 200));
    }
    return TimeSeries(t, v);
  };
  auto check_peaks = [&](const char* name, const TimeSeries& ts, double value, double tol, double ta, double tb) {
    const auto m = find_peaks(ts).maxima;
    if (m.size() != 2) {
      problems.push_back(fmt("%s: %zu maxima", name, m.size()));
      return std::string{};
    }
    const double at[2] = {ta, tb};
    for (int i = 0; i < 2; ++i) {
      if (std::abs(m[i].time - at[i]) > 0.01 + 1e-9 || std::abs(m[i].value - value) > tol)
        problems.push_back(fmt("%s: peak %.4f at t=%.2f", name, m[i].value, m[i].time));
    }
    return fmt("%s peaks %.5f@%.2f, %.5f@%.2f", name, m[0].value, m[0].time, m[1].value, m[1].time);
  };
  const auto a = check_peaks("pinned-pinned", history(BarBc::pinned_pinned, 0.5, 4.0), 0.125, 1e-3, 1.0, 3.0);
  const auto b = check_peaks("pinned-free", history(BarBc::pinned_free, 1.0, 8.0), 0.5, 2e-3, 2.0, 6.0);

  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    const Jet2 u{x * (1 - x) / 4, (1 - 2 * x) / 4, 0.0, -0.5, 0.0};
    const Jet2 z{(1 - 2 * x) / 4, -0.5, 0.0, 0.0, 0.0};
    const Jet2 zero{};
    const std::vector<std::pair<FormId, std::vector<Jet2>>> states{{FormId::bar_f1, {u}},
                                                                   {FormId::bar_f2a, {u, zero}},
                                                                   {FormId::bar_f2b, {u, z}},
                                                                   {FormId::bar_f3, {u, z, zero}}};
    for (const auto& [form, jets] : states)
      for (double r : residuals(form, jets, 1.0, 0.5, 0.0)) worst = std::max(worst, std::abs(r));
  }
  if (worst >= 1e-12) problems.push_back(fmt("static residual %.2e", worst));
  const double dt = seconds_since(t0);
  if (dt >= 10.0) problems.push_back(fmt("took %.1f s", dt));
  std::string detail = a + "; " + b + fmt("; static residual %.1e; %.2f s", worst, dt);
  for (const auto& p : problems) detail += " [" + p + "]";
  return {problems.empty(), detail};
}

// -- 5 ----------------------------------------------------------------------

Outcome schedule_exactness() {
  Schedule s4;
  s4.kind = ScheduleKind::lrs4_piecewise;
  s4.init_lr = 0.003;
  s4.factors = {0.9, 0.8, 0.7};
  s4.cycle_steps = {100, 100, 100, 100};
  const double want[] = {0.003, 2.7e-3, 2.16e-3, 1.512e-3};
  double err4 = 0.0;
  for (int c = 0; c < 4; ++c) err4 = std::max(err4, std::abs(lr_at(s4, c * 100) - want[c]) / want[c]);

  Schedule s1;
  s1.kind = ScheduleKind::lrs1_ca;
  s1.init_lr = 0.01;
  s1.cycle_steps = {25000, 25000, 50000, 50000, 50000};
  double start_err = 0.0, ratio_err = 0.0;
  std::int64_t begin = 0;
  for (auto n : s1.cycle_steps) {
    start_err = std::max(start_err, std::abs(lr_at(s1, begin) - s1.init_lr));
    ratio_err = std::max(ratio_err, std::abs(lr_at(s1, begin + s1.period_steps) / lr_at(s1, begin) - 0.9));
    begin += n;
  }
  // LRS4 values are products of binary fractions; "exact" means to the last ulp or two.
  const bool pass = err4 < 1e-15 && start_err == 0.0 && ratio_err < 1e-12;
  return {pass, fmt("LRS4 max rel dev %.1e; LRS1 cycle-start dev %.1e, period ratio dev %.1e", err4, start_err,
                    ratio_err)};
}

// -- 6 ----------------------------------------------------------------------

Outcome barrier_properties() {
  bool monotone = true;
  for (auto shape : {BarrierShape::inverse, BarrierShape::log}) {
    double prev = barrier_value(shape, 1.0 + 1e-9, 1.0);
    for (double m = 1.0 + 1e-6; m < 1e3; m *= 1.05) {
      const double v = barrier_value(shape, m, 1.0);
      monotone &= v < prev;
      prev = v;
    }
  }
  int raised = 0;
  for (double m : {1.0, 0.5, -3.0, 1.0 + 1e-13}) {
    try {
      barrier_value(BarrierShape::inverse, m, 1.0);
    } catch (const InsideBufferError&) {
      ++raised;
    }
  }
  const auto pb = make_problem("rod-cantilever", FormId::rod_f3);
  JetBatch j(9, 1);
  j.component(JetComponent::dt)(rod_out::pX, 0) = 3.0;
  j.component(JetComponent::dt)(rod_out::pY, 0) = 4.0;
  const std::vector<Point> pts{{0.5, 0.5}};
  const double m = margin(BarrierBasis::acceleration, {&pb, pts, 0, 1}, j);
  const double b = barrier_value(BarrierShape::inverse, m, 1.0);
  return {monotone && raised == 4 && b == 0.25,
          fmt("monotone %s; inside-buffer raised %d/4; margin %.17g -> barrier %.17g", monotone ? "yes" : "no",
              raised, m, b)};
}

// -- 7 ----------------------------------------------------------------------

Outcome fitter_round_trip() {
  std::vector<double> t, ref, comp;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(i * 0.01);
    ref.push_back(exact_bar(BarBc::pinned_pinned, 0.5, t.back()));
    comp.push_back(1.1 * exact_bar(BarBc::pinned_pinned, 0.5, t.back() - 0.2) - 0.01);
  }
  const auto fit = fit_shift_amp(TimeSeries(t, comp), TimeSeries(t, ref));
  const bool pass =
      std::abs(fit.amp - 1.1) < 1e-3 && std::abs(fit.shift - 0.2) <= 0.01 + 1e-9 && std::abs(fit.vshift + 0.01) < 1e-3;
  return {pass, fmt("amp %.5f, shift %.3f, vshift %.5f", fit.amp, fit.shift, fit.vshift)};
}

// -- 11 ---------------------------------------------------------------------

Outcome smse_re_check() {
  const std::vector<double> exact(100, 0.0);
  std::vector<double> comp(100);
  for (int i = 0; i < 100; ++i) comp[i] = i % 2 ? 8e-3 : -8e-3;
  const auto e = smse_re(comp, exact, 0.25);
  const auto same = smse_re(exact, exact, 0.25);
  const bool pass = std::abs(e.re - 0.032) < 1e-12 && same.smse == 0.0 && same.re == 0.0;
  return {pass, fmt("smse %.3g, RE %.4g%%; identical -> (%g, %g)", e.smse, 100 * e.re, same.smse, same.re)};
}

// -- training helpers --------------------------------------------------------

TrainConfig base_config(std::int64_t steps) {
  TrainConfig cfg;
  cfg.schedule.kind = ScheduleKind::lrs3_nca;
  cfg.schedule.init_lr = 0.01;
  cfg.schedule.cycle_steps = {steps};
  return cfg;
}

RunRecord train_logged(const TrainConfig& cfg, const std::string& label) {
  const auto t0 = Clock::now();
  const std::int64_t every = std::max<std::int64_t>(1, cfg.schedule.total_steps() / 10);
  auto rec = train(cfg, [&](const HistoryRow& row) {
    if (row.step % every == 0)
      std::cerr << "  " << label << " step " << row.step << " loss " << row.total << " (" << seconds_since(t0)
                << " s)\n";
  });
  std::cerr << "  " << label << " done in " << seconds_since(t0) << " s\n";
  return rec;
}

TimeSeries history_of(const MlpNetwork& net, FormId form, Probe probe, double T) {
  return sample_history(net, form, probe, linspace(0.0, T, static_cast<std::size_t>(std::lround(T / 0.01)) + 1), T)
      .series;
}

// -- 8 ----------------------------------------------------------------------

Outcome desk_training() {
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto cfg = base_config(25000);
    cfg.preset = "bar-pinned-pinned";
    cfg.form = FormId::bar_f2a;
    cfg.width = 32;
    cfg.hidden = 2;
    cfg.grid = {GridKind::fixed_random, 51, 42};
    cfg.init = {InitKind::he_uniform, seed};
    const auto t0 = Clock::now();
    const auto rec = train_logged(cfg, "seed " + std::to_string(seed));
    const double dt = seconds_since(t0);
    if (!rec.ok()) {
      detail += fmt(" seed %d: stopped (%s);", static_cast<int>(seed), rec.failure.c_str());
      continue;
    }
    const double loss = rec.history.back().total;
    const auto ts = history_of(rec.final_network(), cfg.form, Probe::midspan_disp, 4.0);
    const auto peaks = find_peaks(ts).maxima;
    const double spacing = peaks.size() >= 2 ? peaks[1].time - peaks[0].time : NAN;
    double damping = NAN;
    if (peaks.size() >= 2) damping = damping_percent(ts).pct;
    const bool is_static = detect_static(ts).is_static;
    const bool pass = loss < 1e-3 && peaks.size() >= 2 && std::abs(spacing - 2.0) <= 0.3 &&
                      std::abs(damping) < 15.0 && !is_static;
    detail += fmt(" seed %d: loss %.2e, %zu maxima, spacing %.2f, damping %.2f%%, static %s, %.0f s;",
                  static_cast<int>(seed), loss, peaks.size(), spacing, damping, is_static ? "yes" : "no", dt);
    if (pass) return {true, "best of 3 passed:" + detail};
  }
  return {false, "no seed passed:" + detail};
}

// -- 9 ----------------------------------------------------------------------

double acceleration_margin(const RunRecord& rec, const TrainConfig& cfg) {
  const auto pb = cfg.problem();
  const PinnLoss loss(pb, rec.grid);
  const JetBatch jets = jet_forward(rec.final_network(), loss.points());
  return margin(BarrierBasis::acceleration, {&pb, loss.points(), 0, loss.interior_count()}, jets);
}

Outcome static_filtering() {
  std::string detail;
  bool any_static = false;
  double best_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto cfg = base_config(10000);
    cfg.preset = "bar-pinned-free";
    cfg.form = FormId::bar_f1;
    cfg.width = 64;
    cfg.hidden = 2;
    cfg.grid = {GridKind::regular, 51, 42};
    cfg.init = {InitKind::he_uniform, seed};
    const double T = cfg.problem().final_time;

    const auto plain = train_logged(cfg, "seed " + std::to_string(seed) + " plain");
    auto barred_cfg = cfg;
    barred_cfg.barrier.shape = BarrierShape::inverse;
    barred_cfg.barrier.basis = BarrierBasis::acceleration;
    barred_cfg.barrier.depth = 1.0;
    barred_cfg.barrier.weight = 1.0;
    const auto barred = train_logged(barred_cfg, "seed " + std::to_string(seed) + " barrier");

    const bool plain_static =
        plain.ok() && detect_static(history_of(plain.final_network(), cfg.form, Probe::free_end_disp, T)).is_static;
    const bool barred_static =
        barred.ok() && detect_static(history_of(barred.final_network(), cfg.form, Probe::free_end_disp, T)).is_static;
    const double m_plain = plain.ok() ? acceleration_margin(plain, cfg) : NAN;
    const double m_barred = barred.ok() ? acceleration_margin(barred, cfg) : NAN;
    any_static |= plain_static;
    if (m_plain > 0.0) best_ratio = std::max(best_ratio, m_barred / m_plain);
    detail += fmt(" seed %d: plain static %s (loss %.2e, margin %.3f), barrier static %s (loss %.2e, margin %.3f, %lld "
                  "inside-buffer steps);",
                  static_cast<int>(seed), plain_static ? "yes" : "no", plain.history.back().pinn, m_plain,
                  barred_static ? "yes" : "no", barred.history.back().pinn, m_barred,
                  static_cast<long long>(barred.inside_buffer_events));
    if (plain_static && barred.ok() && !barred_static) return {true, "filtered:" + detail};
  }
  if (!any_static) {
    const bool pass = best_ratio >= 2.0;
    return {pass, fmt("degraded form (no unbarriered run went static), best margin ratio %.2f (>= 2):", best_ratio) +
                      detail};
  }
  return {false, "barrier did not prevent the static solution:" + detail};
}

// -- 10 ---------------------------------------------------------------------

Outcome zero_load() {
  auto cfg = base_config(5000);
  cfg.preset = "bar-pinned-pinned";
  cfg.form = FormId::bar_f2a;
  cfg.preset_options.fX = 0.0;
  cfg.init = {InitKind::he_uniform, 1};
  const auto rec = train_logged(cfg, "zero load");
  if (!rec.ok()) return {false, "run stopped: " + rec.failure};
  const auto pts = PinnLoss(cfg.problem(), rec.grid).points();
  const auto jets = jet_forward(rec.final_network(), pts);
  const double mean_abs = jets.component(JetComponent::v).row(0).cwiseAbs().mean();
  return {mean_abs < 1e-2, fmt("mean |u| %.2e over %zu grid points (< 1e-2), loss %.2e", mean_abs, pts.size(),
                               rec.history.back().total)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"derivative exactness", derivative_exactness}},
      {2, {"gradient exactness", gradient_exactness}},
      {3, {"parameter counts", parameter_counts}},
      {4, {"oracle fidelity", oracle_fidelity}},
      {5, {"schedule exactness", schedule_exactness}},
      {6, {"barrier properties", barrier_properties}},
      {7, {"shift/amp fitter round trip", fitter_round_trip}},
      {8, {"desk-scale training, pinned-pinned Form 2a", desk_training}},
      {9, {"static-solution filtering", static_filtering}},
      {10, {"zero-load sanity", zero_load}},
      {11, {"SMSE/RE", smse_re_check}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      const int k = std::stoi(argv[i]);
      if (!criteria.contains(k)) throw std::out_of_range("criterion");
      selected.insert(k);
    } catch (const std::exception&) {
      std::cerr << "usage: acceptance [criterion number ...]  (1-11)\n";
      return 1;
    }
  }
  if (selected.empty())
    for (const auto& [k, _] : criteria) selected.insert(k);

  int failed = 0;
  for (int k : selected) {
    const auto& [name, fn] = criteria.at(k);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k << ". " << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
