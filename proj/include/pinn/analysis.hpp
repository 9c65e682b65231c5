#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pinn/jets.hpp"
#include "pinn/network.hpp"
#include "pinn/problems.hpp"
#include "pinn/timeseries.hpp"

namespace pinn {

// ---------------------------------------------------------------------------
// Exact bar solution (s = 1, fX = 1/2, zero initial conditions)

enum class BarBc { pinned_pinned, pinned_free };

inline constexpr int kDefaultModes = 200;

/// Modal series u(x,t) = u_st(x) - sum_n c_n sin(k_n x) cos(k_n t).
///   pinned-pinned: u_st = x(1-x)/4, k_n = n pi (odd n), c_n = 2/k_n^3
///   pinned-free:   u_st = x(2-x)/4, k_n = (2n-1) pi/2,  c_n = 1/k_n^3
double exact_bar(BarBc bc, double x, double t, int n_terms = kDefaultModes);

/// The series with its first and pure second derivatives.
Jet2 exact_bar_jet(BarBc bc, double x, double t, int n_terms = kDefaultModes);

double exact_bar_static(BarBc bc, double x);

/// Boundary condition of a bar preset, if it has an exact solution.
std::optional<BarBc> bar_bc_of(std::string_view preset);

// ---------------------------------------------------------------------------
// Peaks and damping

struct Extremum {
  std::size_t index = 0;
  double time = 0.0;
  double value = 0.0;
};

struct Peaks {
  std::vector<Extremum> maxima;
  std::vector<Extremum> minima;
};

/// Interior local extrema by 3-point comparison on raw samples. A plateau
/// counts once, at its first sample, when both of its neighbours lie on the
/// same side.
Peaks find_peaks(const TimeSeries& ts);

enum class DampingQuality { quasi_perfect, very_good, good, high_damping };

std::string_view to_string(DampingQuality q);
DampingQuality classify_damping(double pct);

struct Damping {
  double pct = 0.0;
  DampingQuality quality = DampingQuality::quasi_perfect;
};

/// pct = 100 (max_1 / max_2 - 1) over the first two local maxima.
/// Throws InsufficientPeaksError with fewer than two maxima.
Damping damping_percent(const TimeSeries& ts);

// ---------------------------------------------------------------------------
// Shift / amplification

/// computed(t) ~ amp * reference(t - shift) + vshift.
struct ShiftAmpFit {
  double shift = 0.0;
  double vshift = 0.0;
  double amp = 1.0;
  double ref_ptp = 0.0;

  double amp_ptp() const { return amp * ref_ptp; }
};

/// amp from the peak-to-peak ratio, shift from the first-maximum times, vshift
/// as the mean residual over the overlap after shifting and scaling.
/// Throws InvalidArgument for a flat reference or no overlap and
/// InsufficientPeaksError when the reference has fewer than two maxima.
ShiftAmpFit fit_shift_amp(const TimeSeries& computed, const TimeSeries& reference);

struct ErrorMetrics {
  double smse = 0.0;
  double re = 0.0;
};

/// Root mean squared error over the common samples (matched by time, the
/// exact series interpolated) and its ratio to `peak_to_peak`.
ErrorMetrics smse_re(const TimeSeries& computed, const TimeSeries& exact, double peak_to_peak);

/// Same metric when both series are already known to share sample times.
ErrorMetrics smse_re(std::span<const double> computed, std::span<const double> exact, double peak_to_peak);

// ---------------------------------------------------------------------------
// Network probes

enum class Probe { midspan_disp, free_end_disp, velocity, slope, shape };

std::string_view to_string(Probe p);

struct ProbeSeries {
  TimeSeries series;
  std::vector<bool> extrapolated;  // t > final time
};

/// History at a fixed x. midspan_disp and free_end_disp read u at x = 0.5 and
/// x = 1 (x is ignored); velocity reads the axial momentum output when the
/// Form splits time and u_t otherwise; slope reads u_x.
ProbeSeries sample_history(const MlpNetwork& net, FormId form, Probe probe, std::span<const double> times,
                           double final_time, double x = 0.5);

/// u at every x for a fixed time.
std::vector<double> sample_shape(const MlpNetwork& net, std::span<const double> xs, double t);

/// n evenly spaced samples on [a, b] (both included).
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace pinn
