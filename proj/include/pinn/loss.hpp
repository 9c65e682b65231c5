#pragma once

#include <span>
#include <string>
#include <vector>

#include "pinn/barriers.hpp"
#include "pinn/jets.hpp"
#include "pinn/problems.hpp"
#include "pinn/sampling.hpp"

namespace pinn {

struct LossTerms {
  double pinn = 0.0;     // weighted residual and constraint losses
  double barrier = 0.0;  // weight * barrier value (0 when inactive)
  double total = 0.0;
  double margin = 0.0;
  bool inside_buffer = false;
  std::vector<double> groups;  // unweighted mean squares, one per group
};

/// PINN loss of one problem on one grid.
///
/// Points are ordered interior, left, right, initial. Each residual equation
/// is a group over the interior points; each constraint is a group over the
/// points of its line.
class PinnLoss {
 public:
  PinnLoss(ProblemForm problem, const Grid& grid);

  const ProblemForm& problem() const noexcept { return problem_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t interior_count() const noexcept { return n_interior_; }
  const std::vector<std::string>& group_names() const noexcept { return names_; }

  /// Loss terms; adds dTotal/d(jets) into `adjoint` when given. With a barrier
  /// whose margin is inside the buffer, the barrier term becomes
  /// w * 1e6 * (1 + depth - margin) and `inside_buffer` is set.
  LossTerms evaluate(const JetBatch& jets, JetBatch* adjoint = nullptr, const BarrierSpec* barrier = nullptr) const;

 private:
  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
  };
  Range line_range(Location loc) const;

  ProblemForm problem_;
  std::vector<Point> points_;
  std::size_t n_interior_ = 0;
  Range left_, right_, initial_;
  std::vector<double> fx_, fy_;  // loads at interior points
  std::vector<std::string> names_;
};

}  // namespace pinn
