#pragma once

#include <cstddef>
#include <vector>

namespace pinn {

/// Sampled scalar history: strictly increasing times, finite values.
class TimeSeries {
 public:
  TimeSeries() = default;
  /// Throws InvalidArgument on length mismatch, non-increasing times or
  /// non-finite values.
  TimeSeries(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  double min_value() const;
  double max_value() const;
  double peak_to_peak() const { return max_value() - min_value(); }

  /// Linear interpolation; requires times().front() <= t <= times().back().
  double interpolate(double t) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace pinn
