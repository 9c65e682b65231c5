#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "pinn/types.hpp"

namespace pinn {

enum class GridKind { regular, fixed_random, varying_random };

std::string_view to_string(GridKind kind);

/// Collocation points over [0,1] x [0,T].
///
/// Constraint lines own their points: `left` (x = 0), `right` (x = 1) and
/// `initial` (t = 0) each hold N points. For the regular kind the interior is
/// the rest of the N x N lattice; for random kinds it is N^2 independent
/// points in the open rectangle.
struct Grid {
  GridKind kind = GridKind::regular;
  int N = 0;
  double T = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<Point> interior;
  std::vector<Point> left;
  std::vector<Point> right;
  std::vector<Point> initial;

  std::size_t size() const { return interior.size() + left.size() + right.size() + initial.size(); }
};

/// N x N lattice at (i/(N-1), T j/(N-1)). N must be odd and >= 3 so that the
/// space-time center is a lattice point.
Grid regular_grid(int N, double T);

/// Uniform random grid; with a seed the grid is a pure function of (N, T, seed).
Grid random_grid(int N, double T, std::optional<std::uint64_t> seed);

/// CSV with header "x,t,role", role in {interior,left,right,initial}.
void write_grid_csv(const Grid& grid, const std::filesystem::path& path);
Grid read_grid_csv(const std::filesystem::path& path);

}  // namespace pinn
