#include "pinn/schedule.hpp"

#include <string>

#include "pinn/errors.hpp"

namespace pinn {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::lrs1_ca: return "LRS1_CA";
    case ScheduleKind::lrs2_vca: return "LRS2_VCA";
    case ScheduleKind::lrs3_nca: return "LRS3_NCA";
    case ScheduleKind::lrs4_piecewise: return "LRS4_PIECEWISE";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "LRS1_CA" || name == "LRS1" || name == "CA") return ScheduleKind::lrs1_ca;
  if (name == "LRS2_VCA" || name == "LRS2" || name == "VCA") return ScheduleKind::lrs2_vca;
  if (name == "LRS3_NCA" || name == "LRS3" || name == "NCA") return ScheduleKind::lrs3_nca;
  if (name == "LRS4_PIECEWISE" || name == "LRS4" || name == "PIECEWISE") return ScheduleKind::lrs4_piecewise;
  throw InvalidArgument("unknown schedule '" + std::string(name) + "'");
}

void Schedule::validate() const {
  if (cycle_steps.empty()) throw InvalidArgument("schedule needs at least one cycle");
  for (auto n : cycle_steps) {
    if (n <= 0) throw InvalidArgument("cycle step counts must be positive");
  }
  if (period_steps <= 0) throw InvalidArgument("period must be positive");
  if (extension_steps < 0) throw InvalidArgument("extension steps must be non-negative");
  if (!(decay > 0.0 && decay <= 1.0)) throw InvalidArgument("decay factor must be in (0, 1]");
  if (kind == ScheduleKind::lrs2_vca) {
    if (init_lrs.size() < cycle_steps.size()) throw InvalidArgument("LRS2 needs one initial rate per cycle");
    for (double lr : init_lrs) {
      if (!(lr > 0.0)) throw InvalidArgument("learning rates must be positive");
    }
  } else if (!(init_lr > 0.0)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (kind == ScheduleKind::lrs4_piecewise) {
    if (factors.size() + 1 < cycle_steps.size()) throw InvalidArgument("LRS4 needs a factor per cycle boundary");
    for (double f : factors) {
      if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("LRS4 factors must be in (0, 1]");
    }
  }
}

std::int64_t Schedule::total_steps() const {
  std::int64_t total = extension_steps;
  for (auto n : cycle_steps) total += n;
  return total;
}

std::pair<int, std::int64_t> Schedule::cycle_of(std::int64_t step) const {
  std::int64_t start = 0;
  const int last = static_cast<int>(cycle_steps.size()) - 1;
  for (int c = 0; c < last; ++c) {
    if (step < start + cycle_steps[c]) return {c, start};
    start += cycle_steps[c];
  }
  return {last, start};
}

double lr_at(const Schedule& s, std::int64_t step) {
  s.validate();
  if (step < 0 || step >= s.total_steps()) {
    throw InvalidArgument("step " + std::to_string(step) + " outside the schedule");
  }
  const auto [cycle, start] = s.cycle_of(step);
  const double rate = 1.0 / s.decay - 1.0;
  auto inverse_time = [&](double lr0, std::int64_t k) {
    return lr0 / (1.0 + rate * static_cast<double>(k) / static_cast<double>(s.period_steps));
  };
  switch (s.kind) {
    case ScheduleKind::lrs1_ca: return inverse_time(s.init_lr, step - start);
    case ScheduleKind::lrs2_vca: return inverse_time(s.init_lrs[cycle], step - start);
    case ScheduleKind::lrs3_nca: return inverse_time(s.init_lr, step);
    case ScheduleKind::lrs4_piecewise: {
      double lr = s.init_lr;
      for (int c = 0; c < cycle; ++c) lr *= s.factors[c];
      return lr;
    }
  }
  return s.init_lr;
}

}  // namespace pinn
