#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pinn/jets.hpp"
#include "pinn/network.hpp"

namespace pinn {

// ---------------------------------------------------------------------------
// Finite-difference oracles

/// f'(x) by central differences with Richardson extrapolation over h, h/2, h/4.
double richardson_first(const std::function<double(double)>& f, double x, double h = 1e-2);
/// f''(x), same scheme on the three-point second difference.
double richardson_second(const std::function<double(double)>& f, double x, double h = 1e-2);

/// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-12);

/// Largest relative error of the five jet components of every output
/// against Richardson differences of the plain forward pass.
double jet_fd_error(const MlpNetwork& net, Point p);

/// Test loss reading every jet component:
///   L = sum_p sum_o sum_c a_{o,c} * jet_c(o,p)^2 / 2 + b_{o,c} * jet_c(o,p)
/// with fixed coefficients drawn from `seed`.
LossFn mixed_jet_loss(int n_out, std::uint64_t seed);

/// Largest relative error of loss_gradient against central differences of
/// the loss in every parameter (Richardson-extrapolated). Relative errors use
/// a floor of 1e-6 times the largest gradient entry.
double gradient_fd_error(const MlpNetwork& net, const LossFn& loss, std::span<const Point> points);

// ---------------------------------------------------------------------------
// Verification report

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

std::vector<CheckResult> verify_oracle();
std::vector<CheckResult> verify_gradients();
std::vector<CheckResult> verify_schedule();
/// Round-trip and corruption detection; with a path, also loads that file.
std::vector<CheckResult> verify_checkpoint(const std::optional<std::filesystem::path>& file = std::nullopt);

/// Prints one line per check; returns true when all pass.
bool print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace pinn
