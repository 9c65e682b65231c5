#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pinn {

enum class ScheduleKind {
  lrs1_ca,        // cyclic annealing, same initial rate each cycle
  lrs2_vca,       // cyclic annealing, per-cycle initial rates
  lrs3_nca,       // no cyclic annealing
  lrs4_piecewise  // constant per cycle, multiplied by a factor at each boundary
};

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

/// Learning-rate schedule over cycles and periods.
///
/// LRS1-3 use inverse-time decay within a period budget:
///   lr(k) = lr0 / (1 + r * k / P),  r = 1/decay - 1,
/// so the rate drops to `decay` times its start value after the first period
/// P of a cycle. LRS1/2 restart k at every cycle start; LRS3 never restarts.
/// `extension_steps` (ELRS) lengthens the last cycle without a reset.
struct Schedule {
  ScheduleKind kind = ScheduleKind::lrs1_ca;
  double init_lr = 1e-3;
  std::vector<double> init_lrs;  // LRS2: one per cycle
  std::vector<std::int64_t> cycle_steps{25000, 25000, 50000, 50000, 50000};
  std::int64_t period_steps = 2500;
  double decay = 0.9;
  std::vector<double> factors;  // LRS4: applied at the start of cycles 2, 3, ...
  std::int64_t extension_steps = 0;

  /// Throws InvalidArgument on non-positive step counts, factors outside
  /// (0, 1] or missing per-cycle lists.
  void validate() const;
  std::int64_t total_steps() const;
  /// Cycle index (0-based) holding `step` and the first step of that cycle.
  std::pair<int, std::int64_t> cycle_of(std::int64_t step) const;
};

/// Learning rate at a 0-based step; InvalidArgument when step is out of range.
double lr_at(const Schedule& s, std::int64_t step);

}  // namespace pinn
