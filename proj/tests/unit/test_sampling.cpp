#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <utility>

#include "pinn/errors.hpp"
#include "pinn/sampling.hpp"

using namespace pinn;

namespace {

std::set<std::pair<double, double>> unique_points(const Grid& g) {
  std::set<std::pair<double, double>> s;
  for (const auto* line : {&g.interior, &g.left, &g.right, &g.initial})
    for (const auto& p : *line) s.insert({p.x, p.t});
  return s;
}

bool contains(const Grid& g, Point p) { return unique_points(g).count({p.x, p.t}) == 1; }

}  // namespace

TEST_CASE("regular grid") {
  const auto g = regular_grid(11, 4.0);
  CHECK(unique_points(g).size() == 121);
  CHECK(contains(g, {0.5, 2.0}));
  CHECK(g.left.size() == 11);
  CHECK(g.right.size() == 11);
  CHECK(g.initial.size() == 11);
  for (const auto& p : g.interior) {
    CHECK(p.x > 0.0);
    CHECK(p.x < 1.0);
    CHECK(p.t > 0.0);
  }
  CHECK(unique_points(regular_grid(51, 4.0)).size() == 2601);
  const auto small = regular_grid(3, 2.0);
  CHECK(contains(small, {0.0, 0.0}));
  CHECK(contains(small, {1.0, 2.0}));
  CHECK_THROWS_AS(regular_grid(10, 4.0), InvalidArgument);
  CHECK_THROWS_AS(regular_grid(11, 0.0), InvalidArgument);
}

TEST_CASE("random grid") {
  const auto a = random_grid(51, 4.0, 42);
  const auto b = random_grid(51, 4.0, 42);
  const auto c = random_grid(51, 4.0, 43);
  CHECK(a.interior.size() == 2601);
  CHECK(a.kind == GridKind::fixed_random);
  CHECK(a.interior == b.interior);
  CHECK(a.left == b.left);
  CHECK(a.interior != c.interior);
  for (const auto& p : a.interior) {
    CHECK(p.x > 0.0);
    CHECK(p.x < 1.0);
    CHECK(p.t > 0.0);
    CHECK(p.t < 4.0);
  }
  for (const auto& p : a.left) CHECK(p.x == 0.0);
  for (const auto& p : a.right) CHECK(p.x == 1.0);
  for (const auto& p : a.initial) CHECK(p.t == 0.0);

  const auto v1 = random_grid(11, 4.0, std::nullopt);
  const auto v2 = random_grid(11, 4.0, std::nullopt);
  CHECK(v1.kind == GridKind::varying_random);
  CHECK(v1.interior != v2.interior);
}

TEST_CASE("grid CSV round trip is exact") {
  const auto g = random_grid(7, 3.0, 5);
  const auto path = std::filesystem::temp_directory_path() / "pinn_test_grid.csv";
  write_grid_csv(g, path);
  const auto r = read_grid_csv(path);
  CHECK(r.interior == g.interior);
  CHECK(r.left == g.left);
  CHECK(r.right == g.right);
  CHECK(r.initial == g.initial);
  std::filesystem::remove(path);
}
