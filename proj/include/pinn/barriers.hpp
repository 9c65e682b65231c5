#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "pinn/jets.hpp"
#include "pinn/problems.hpp"
#include "pinn/timeseries.hpp"

namespace pinn {

enum class BarrierShape { inverse, log };
enum class BarrierBasis { static_solution, static_operator, acceleration };

std::string_view to_string(BarrierShape shape);
std::string_view to_string(BarrierBasis basis);
BarrierShape parse_barrier_shape(std::string_view name);
BarrierBasis parse_barrier_basis(std::string_view name);

struct BarrierSpec {
  BarrierShape shape = BarrierShape::inverse;
  BarrierBasis basis = BarrierBasis::acceleration;
  double depth = 1.0;
  double weight = 0.0;  // 0 disables the barrier
  /// First step at which the barrier is no longer applied.
  std::optional<std::int64_t> off_at;

  bool enabled() const { return weight > 0.0; }
  bool active_at(std::int64_t step) const { return enabled() && (!off_at || step < *off_at); }
};

/// Smallest admissible distance between margin and depth.
inline constexpr double kBufferTolerance = 1e-12;
/// Penalty scale applied (times the weight) once the iterate is inside the buffer.
inline constexpr double kInsideBufferPenalty = 1e6;

/// inverse: 1/(x-d); log: -log(x-d). Throws InsideBufferError when
/// x - d <= 1e-12.
double barrier_value(BarrierShape shape, double margin, double depth);
/// d barrier_value / d margin, same domain.
double barrier_slope(BarrierShape shape, double margin, double depth);

/// J + w * barrier_value(margin). Throws InsideBufferError like barrier_value
/// when the barrier is enabled.
double augment_loss(double J, const BarrierSpec& spec, double margin);

/// Inputs the margin needs besides the jets: the problem and the interior
/// points [begin, end) of the batch on which the margin is measured.
struct MarginDomain {
  const ProblemForm* problem = nullptr;
  std::span<const Point> points;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Batch margin, aggregated as a root mean square over the domain points:
///   acceleration:    sqrt(mean |p_dot|^2), p_dot from momentum outputs
///                    (u_tt for Forms that do not split time)
///   static_operator: sqrt(mean |static residual vector|^2)
///   static_solution: sqrt(mean (u - u_st)^2); InvalidArgument when the
///                    problem has no known static solution.
/// When `adjoint` is given, `scale * d margin / d jets` is added to it.
double margin(BarrierBasis basis, const MarginDomain& domain, const JetBatch& jets, JetBatch* adjoint = nullptr,
              double scale = 0.0);

struct StaticDetection {
  bool is_static = false;
  double onset_time = 0.0;
};

/// Flags a jump-then-plateau history. Onset is the first sample whose change
/// from the initial value reaches 90% of the final change; the series is
/// static when the samples from the onset on have a standard deviation below
/// 2% of the peak-to-peak range and the onset lies in the first 30% of the
/// time span.
StaticDetection detect_static(const TimeSeries& series);

}  // namespace pinn
