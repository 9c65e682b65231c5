#include "pinn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pinn/errors.hpp"

namespace pinn {

// ---------------------------------------------------------------------------
// TimeSeries

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw InvalidArgument("time series: times and values differ in length");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
      throw InvalidArgument("time series: non-finite sample at index " + std::to_string(i));
    if (i > 0 && !(times_[i] > times_[i - 1])) throw InvalidArgument("time series: times must increase strictly");
  }
}

double TimeSeries::min_value() const {
  if (values_.empty()) throw InvalidArgument("time series is empty");
  return *std::min_element(values_.begin(), values_.end());
}

double TimeSeries::max_value() const {
  if (values_.empty()) throw InvalidArgument("time series is empty");
  return *std::max_element(values_.begin(), values_.end());
}

double TimeSeries::interpolate(double t) const {
  if (values_.empty()) throw InvalidArgument("time series is empty");
  if (t < times_.front() || t > times_.back()) throw InvalidArgument("time series: t outside the sampled range");
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin());
  if (times_[i] == t) return values_[i];
  const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return (1.0 - w) * values_[i - 1] + w * values_[i];
}

// ---------------------------------------------------------------------------
// Exact bar

namespace {

struct Mode {
  double k;
  double c;
};

Mode mode(BarBc bc, int n) {
  using std::numbers::pi;
  if (bc == BarBc::pinned_pinned) {
    const double k = (2 * n - 1) * pi;  // odd multiples only
    return {k, 2.0 / (k * k * k)};
  }
  const double k = (2 * n - 1) * pi / 2;
  return {k, 1.0 / (k * k * k)};
}

}  // namespace

double exact_bar_static(BarBc bc, double x) {
  return bc == BarBc::pinned_pinned ? x * (1.0 - x) / 4.0 : x * (2.0 - x) / 4.0;
}

double exact_bar(BarBc bc, double x, double t, int n_terms) {
  return exact_bar_jet(bc, x, t, n_terms).v;
}

Jet2 exact_bar_jet(BarBc bc, double x, double t, int n_terms) {
  if (n_terms < 1) throw InvalidArgument("exact_bar needs at least one mode");
  Jet2 j;
  j.v = exact_bar_static(bc, x);
  j.dx = bc == BarBc::pinned_pinned ? (1.0 - 2.0 * x) / 4.0 : (2.0 - 2.0 * x) / 4.0;
  j.dxx = -0.5;
  // Sum smallest terms first.
  for (int n = n_terms; n >= 1; --n) {
    const auto [k, c] = mode(bc, n);
    const double sx = std::sin(k * x), cx = std::cos(k * x);
    const double st = std::sin(k * t), ct = std::cos(k * t);
    j.v -= c * sx * ct;
    j.dx -= c * k * cx * ct;
    j.dt += c * k * sx * st;
    j.dxx += c * k * k * sx * ct;
    j.dtt += c * k * k * sx * ct;
  }
  return j;
}

std::optional<BarBc> bar_bc_of(std::string_view preset) {
  if (preset == "bar-pinned-pinned") return BarBc::pinned_pinned;
  if (preset == "bar-pinned-free") return BarBc::pinned_free;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Peaks and damping

Peaks find_peaks(const TimeSeries& ts) {
  Peaks out;
  const auto& t = ts.times();
  const auto& v = ts.values();
  const std::size_t n = v.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 >= n) break;  // plateau runs into the endpoint
    if (v[i] > v[i - 1] && v[i] > v[j + 1]) out.maxima.push_back({i, t[i], v[i]});
    if (v[i] < v[i - 1] && v[i] < v[j + 1]) out.minima.push_back({i, t[i], v[i]});
    i = j + 1;
  }
  return out;
}

std::string_view to_string(DampingQuality q) {
  switch (q) {
    case DampingQuality::quasi_perfect: return "quasi-perfect";
    case DampingQuality::very_good: return "very good";
    case DampingQuality::good: return "good";
    case DampingQuality::high_damping: return "high damping";
  }
  return "unknown";
}

DampingQuality classify_damping(double pct) {
  const double a = std::abs(pct);
  if (a < 0.5) return DampingQuality::quasi_perfect;
  if (a < 1.5) return DampingQuality::very_good;
  if (a < 3.0) return DampingQuality::good;
  return DampingQuality::high_damping;
}

Damping damping_percent(const TimeSeries& ts) {
  const auto peaks = find_peaks(ts);
  if (peaks.maxima.size() < 2)
    throw InsufficientPeaksError("damping needs two local maxima, found " + std::to_string(peaks.maxima.size()));
  const double pct = 100.0 * (peaks.maxima[0].value / peaks.maxima[1].value - 1.0);
  return {pct, classify_damping(pct)};
}

// ---------------------------------------------------------------------------
// Shift / amplification and errors

ShiftAmpFit fit_shift_amp(const TimeSeries& computed, const TimeSeries& reference) {
  if (computed.empty() || reference.empty()) throw InvalidArgument("fit_shift_amp: empty series");
  const double ref_ptp = reference.peak_to_peak();
  if (!(ref_ptp > 0.0)) throw InvalidArgument("fit_shift_amp: reference has zero peak-to-peak");
  const auto ref_peaks = find_peaks(reference);
  if (ref_peaks.maxima.size() < 2) throw InsufficientPeaksError("fit_shift_amp: reference needs two maxima");

  // A static history has no interior maximum; fall back to its largest sample.
  const auto comp_peaks = find_peaks(computed);
  double t_comp;
  if (!comp_peaks.maxima.empty()) {
    t_comp = comp_peaks.maxima.front().time;
  } else {
    const auto& v = computed.values();
    t_comp = computed.times()[static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin())];
  }

  ShiftAmpFit fit;
  fit.ref_ptp = ref_ptp;
  fit.amp = computed.peak_to_peak() / ref_ptp;
  fit.shift = t_comp - ref_peaks.maxima.front().time;

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const double tr = computed.times()[i] - fit.shift;
    if (tr < reference.times().front() || tr > reference.times().back()) continue;
    sum += computed.values()[i] - fit.amp * reference.interpolate(tr);
    ++count;
  }
  if (count == 0) throw InvalidArgument("fit_shift_amp: series do not overlap after shifting");
  fit.vshift = sum / static_cast<double>(count);
  return fit;
}

ErrorMetrics smse_re(std::span<const double> computed, std::span<const double> exact, double peak_to_peak) {
  if (computed.size() != exact.size() || computed.empty())
    throw InvalidArgument("smse_re: series must be non-empty and of equal length");
  if (!(peak_to_peak > 0.0)) throw InvalidArgument("smse_re: peak-to-peak must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) sum += (computed[i] - exact[i]) * (computed[i] - exact[i]);
  ErrorMetrics e;
  e.smse = std::sqrt(sum / static_cast<double>(computed.size()));
  e.re = e.smse / peak_to_peak;
  return e;
}

ErrorMetrics smse_re(const TimeSeries& computed, const TimeSeries& exact, double peak_to_peak) {
  std::vector<double> a, b;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const double t = computed.times()[i];
    if (exact.empty() || t < exact.times().front() || t > exact.times().back()) continue;
    a.push_back(computed.values()[i]);
    b.push_back(exact.interpolate(t));
  }
  if (a.empty()) throw InvalidArgument("smse_re: no common support");
  return smse_re(a, b, peak_to_peak);
}

// ---------------------------------------------------------------------------
// Probes

std::string_view to_string(Probe p) {
  switch (p) {
    case Probe::midspan_disp: return "midspan";
    case Probe::free_end_disp: return "free-end";
    case Probe::velocity: return "velocity";
    case Probe::slope: return "slope";
    case Probe::shape: return "shape";
  }
  return "unknown";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw InvalidArgument("linspace needs at least two samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

ProbeSeries sample_history(const MlpNetwork& net, FormId form, Probe probe, std::span<const double> times,
                           double final_time, double x) {
  if (probe == Probe::shape) throw InvalidArgument("use sample_shape for shape probes");
  if (probe == Probe::midspan_disp) x = 0.5;
  if (probe == Probe::free_end_disp) x = 1.0;

  std::vector<Point> pts;
  pts.reserve(times.size());
  for (double t : times) pts.push_back({x, t});
  const JetBatch jets = jet_forward(net, pts);

  std::vector<double> values(times.size());
  const int p_out = momentum_output(form);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    switch (probe) {
      case Probe::velocity:
        values[i] = p_out >= 0 ? jets.component(JetComponent::v)(p_out, c) : jets.component(JetComponent::dt)(0, c);
        break;
      case Probe::slope: values[i] = jets.component(JetComponent::dx)(0, c); break;
      default: values[i] = jets.component(JetComponent::v)(0, c); break;
    }
  }
  ProbeSeries out{TimeSeries({times.begin(), times.end()}, std::move(values)), {}};
  out.extrapolated.reserve(times.size());
  for (double t : times) out.extrapolated.push_back(t > final_time);
  return out;
}

std::vector<double> sample_shape(const MlpNetwork& net, std::span<const double> xs, double t) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, t});
  const JetBatch jets = jet_forward(net, pts);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = jets.component(JetComponent::v)(0, static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace pinn
