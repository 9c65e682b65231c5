#include "pinn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pinn/csv.hpp"
#include "pinn/errors.hpp"
#include "pinn/random.hpp"

namespace pinn {

std::string_view to_string(GridKind kind) {
  switch (kind) {
    case GridKind::regular: return "regular";
    case GridKind::fixed_random: return "fixed_random";
    case GridKind::varying_random: return "varying_random";
  }
  return "unknown";
}

Grid regular_grid(int N, double T) {
  if (N < 3 || N % 2 == 0) throw InvalidArgument("regular grid side count must be odd and >= 3");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("final time must be positive");
  Grid g;
  g.kind = GridKind::regular;
  g.N = N;
  g.T = T;
  const double h = 1.0 / (N - 1);
  auto coord_x = [&](int i) { return i == N - 1 ? 1.0 : i * h; };
  auto coord_t = [&](int j) { return j == N - 1 ? T : T * j * h; };
  for (int j = 0; j < N; ++j) {
    g.left.push_back({0.0, coord_t(j)});
    g.right.push_back({1.0, coord_t(j)});
  }
  for (int i = 0; i < N; ++i) g.initial.push_back({coord_x(i), 0.0});
  for (int i = 1; i < N - 1; ++i) {
    for (int j = 1; j < N; ++j) g.interior.push_back({coord_x(i), coord_t(j)});
  }
  return g;
}

Grid random_grid(int N, double T, std::optional<std::uint64_t> seed) {
  if (N < 2) throw InvalidArgument("random grid side count must be >= 2");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("final time must be positive");
  Rng rng = seed ? Rng(*seed) : Rng::from_entropy();
  Grid g;
  g.kind = seed ? GridKind::fixed_random : GridKind::varying_random;
  g.N = N;
  g.T = T;
  g.seed = seed;
  const std::size_t n_int = static_cast<std::size_t>(N) * N;
  g.interior.reserve(n_int);
  for (std::size_t k = 0; k < n_int; ++k) {
    const double x = rng.uniform_open();
    const double t = T * rng.uniform_open();
    g.interior.push_back({x, t});
  }
  for (int k = 0; k < N; ++k) g.left.push_back({0.0, T * rng.uniform()});
  for (int k = 0; k < N; ++k) g.right.push_back({1.0, T * rng.uniform()});
  for (int k = 0; k < N; ++k) g.initial.push_back({rng.uniform(), 0.0});
  return g;
}

void write_grid_csv(const Grid& grid, const std::filesystem::path& path) {
  CsvTable table({"x", "t", "role"});
  auto add = [&](const std::vector<Point>& pts, const char* role) {
    for (const auto& p : pts) table.add_row({format_double(p.x), format_double(p.t), role});
  };
  add(grid.interior, "interior");
  add(grid.left, "left");
  add(grid.right, "right");
  add(grid.initial, "initial");
  write_csv(table, path);
}

Grid read_grid_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const auto ix = table.column_index("x");
  const auto it = table.column_index("t");
  const auto ir = table.column_index("role");
  Grid g;
  g.kind = GridKind::fixed_random;
  double t_max = 0.0;
  for (const auto& row : table.rows()) {
    const Point p{parse_double(row[ix]), parse_double(row[it])};
    t_max = std::max(t_max, p.t);
    const std::string& role = row[ir];
    if (role == "interior") g.interior.push_back(p);
    else if (role == "left") g.left.push_back(p);
    else if (role == "right") g.right.push_back(p);
    else if (role == "initial") g.initial.push_back(p);
    else throw InvalidArgument("unknown grid role '" + role + "'");
  }
  g.N = static_cast<int>(g.left.size());
  g.T = t_max;
  return g;
}

}  // namespace pinn
