#pragma once

namespace pinn {

/// A space-time collocation point in non-dimensional coordinates.
struct Point {
  double x = 0.0;
  double t = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

}  // namespace pinn
