#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <queue>
#include <vector>

#include "budgetpath/field_io.hpp"
#include "budgetpath/oracle.hpp"
#include "budgetpath/scenarios.hpp"

using namespace budgetpath;

namespace {

// Labels of a label-setting search on a lattice: cost to go and budget needed
// before the next reset.
struct Label {
  double cost, need;
};

// Exact shortest paths with resets on a 16-neighbour lattice over [-1,1]^2
// for the convergence problem. Budget is tracked as a real number, so the
// lattice is the only approximation. front[id] holds the Pareto labels.
struct Lattice {
  int n;
  double h;
  std::vector<std::vector<Label>> front;

  explicit Lattice(int size) : n(size), h(2.0 / (size - 1)), front(static_cast<std::size_t>(size) * size) {
    const double third = 1.0 / 3.0;
    auto x_of = [&](int i) { return -1.0 + i * h; };
    auto safe = [&](int i) { return x_of(i) <= third; };
    const int ti = n - 1, tj = (n - 1) / 2;
    auto usable = [&](int i, int j) {
      if (i == ti && j == tj) return true;
      return i > 0 && j > 0 && i < n - 1 && j < n - 1;
    };
    const int moves[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
                              {2, 1},  {2, -1}, {-2, 1}, {-2, -1}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
    using Item = std::tuple<double, double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.emplace(0.0, 0.0, ti + tj * n);
    while (!queue.empty()) {
      const auto [cost, need, id] = queue.top();
      queue.pop();
      auto& f = front[id];
      bool dominated = false;
      for (const Label& l : f) dominated = dominated || (l.cost <= cost && l.need <= need);
      if (dominated) continue;
      f.push_back({cost, need});
      const int i = id % n, j = id / n;
      for (const auto& m : moves) {
        // Arc from (pi, pj) into (i, j); budget is spent on arcs leaving U.
        const int pi = i - m[0], pj = j - m[1];
        if (pi < 0 || pj < 0 || pi >= n || pj >= n || !usable(pi, pj)) continue;
        if (pi == ti && pj == tj) continue;
        const double len = h * std::hypot(m[0], m[1]);
        const double next_need = safe(pi) ? 0.0 : need + len;
        if (next_need > 1.0 + 1e-12) continue;
        queue.emplace(cost + len, next_need, pi + pj * n);
      }
    }
  }

  double value(int i, int j, double b) const {
    double best = kInf;
    for (const Label& l : front[i + j * n]) {
      if (l.need <= b + 1e-12) best = std::min(best, l.cost);
    }
    return best;
  }
};

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("budgetpath_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

double polyline_gap(const PathTrace& a, const PathTrace& b) {
  // Largest distance from a point of `a` to the nearest point of `b`.
  double worst = 0.0;
  for (const PathPoint& p : a.points) {
    double best = kInf;
    for (const PathPoint& q : b.points) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("exact solution examples") {
  CHECK(exact_solution_oracle(0.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(exact_solution_oracle(0.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(exact_solution_oracle(0.9, 0.9, 1.0) == doctest::Approx(std::sqrt(0.82)));
  // More than b from both the line x = 1/3 and the target.
  CHECK_FALSE(is_finite(exact_solution_oracle(0.9, 0.0, 0.05)));
  CHECK(exact_solution_oracle(0.9, 0.0, 0.1) == doctest::Approx(0.1));
  // Safe point whose straight segment crosses x = 1/3 above the end of L.
  const double end = std::sqrt(5.0) / 3.0;
  const double via = std::hypot(1.0 / 3.0 - 0.2, 0.95 - end) + 1.0;
  CHECK(exact_solution_oracle(0.2, 0.95, 0.0) == doctest::Approx(via));
}

TEST_CASE("exact solution against a lattice search") {
  const Lattice lat(161);
  const int levels = 81;
  const double db = 1.0 / (levels - 1);
  long compared = 0, finite_mismatch = 0;
  double worst = 0.0;
  for (int j = 4; j < lat.n - 4; j += 4) {
    for (int i = 4; i < lat.n - 4; i += 4) {
      const double x = -1.0 + i * lat.h, y = -1.0 + j * lat.h;
      for (int k = 0; k < levels; k += 4) {
        const double b = k * db;
        // Lattice paths are at most 2.75% longer than straight ones, which
        // moves the budget edge by up to 0.03; skip that band.
        if (distance_to_discontinuity(x, y, b) < 0.06) continue;
        if (x > 1.0 / 3.0 && std::abs(std::hypot(x - 1.0, y) - b) < 0.06) continue;
        // Where b barely reaches the line x = 1/3 the value moves like
        // sqrt(b - dx), so lattice detours change it by far more than 3%.
        if (x > 1.0 / 3.0 && std::abs(x - 1.0 / 3.0 - b) < 0.1) continue;
        const double exact = exact_solution_oracle(x, y, b);
        const double grid = lat.value(i, j, b);
        if (is_finite(exact) != is_finite(grid)) {
          ++finite_mismatch;
          continue;
        }
        if (!is_finite(exact)) continue;
        ++compared;
        CHECK(grid >= exact - 1e-9);
        // 16-neighbour paths are at most 2.75% longer, plus the lattice
        // misses the line x = 1/3 by less than h on each side.
        worst = std::max(worst, (grid - exact - 2 * lat.h) / exact);
      }
    }
  }
  CHECK(compared > 5000);
  CHECK(finite_mismatch == 0);
  CHECK(worst <= 0.0275);
}

TEST_CASE("convergence errors") {
  const std::vector<ErrorReport> r = run_convergence_test({61, 121});
  REQUIRE(r.size() == 2);
  for (const ErrorReport& e : r) {
    CHECK(e.l1 > 0.0);
    CHECK(e.linf_3h >= e.linf_01);
    CHECK(e.compared > 0);
  }
  CHECK(r[1].l1 < r[0].l1);
  // At N = 121 the band 3h is narrower than 0.1.
  CHECK(r[1].linf_01 <= r[1].linf_3h);
}

TEST_CASE("error report round trip through the emitted files") {
  const auto dir = scratch_dir("roundtrip");
  RunOptions o;
  o.out_dir = dir.string();
  o.oracle = true;
  o.emit.w1_full = true;
  const ScenarioBundle b = run_scenario(convergence_scenario(41), o);
  REQUIRE(b.errors);
  const FieldFile w1 = read_field_file((dir / "w1.txt").string());
  const FieldFile w2 = read_field_file((dir / "w2.txt").string());
  REQUIRE(w1.slices.size() == static_cast<std::size_t>(b.raster.axis.levels));
  BudgetField field;
  field.slices = w1.slices;
  const ErrorReport again = convergence_errors(b.raster.grid, b.raster.axis, field, w2.slices.front());
  CHECK(again.l1 == b.errors->l1);
  CHECK(again.linf_3h == b.errors->linf_3h);
  CHECK(again.linf_01 == b.errors->linf_01);
  CHECK(again.mismatched == b.errors->mismatched);
  CHECK(std::filesystem::exists(dir / "errors.csv"));
  CHECK(std::filesystem::exists(dir / "scenario.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario catalog") {
  const auto names = builtin_scenario_names();
  CHECK(names.size() == 9);
  for (const std::string& name : names) {
    CAPTURE(name);
    const ScenarioConfig c = builtin_scenario(name);
    CHECK(c.name == name);
    CHECK_FALSE(c.starts.empty());
    CHECK(resolve_scenario(name).name == name);
  }
  CHECK_THROWS_AS(builtin_scenario("no-such-scenario"), std::invalid_argument);
  CHECK(builtin_scenario("islands-slow-safe").speed.safe == 0.3);
  CHECK(builtin_scenario("visibility-B0.15").observer.has_value());
  CHECK(builtin_scenario("eight-block").grid_size == 300);
}

TEST_CASE("islands layout") {
  const ScenarioConfig c = islands_scenario(0.3, 201);
  CHECK(c.safe.size() == 4);
  CHECK(c.reconstruction);
  const Grid2D g = rasterize_scenario(c).grid;
  // Safe points are the four islands plus the domain boundary.
  long safe = 0, expected = 0;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Vec2 p = g.point(i, j);
      const bool in_island =
          std::any_of(c.safe.begin(), c.safe.end(), [&](const Region& r) { return r.contains(p, 1e-12); });
      if (g.safe_side(i, j)) ++safe;
      if (in_island || g.on_edge(i, j)) ++expected;
      if (g.safe_side(i, j) != (in_island || g.on_edge(i, j))) FAIL("mask differs at " << i << "," << j);
    }
  }
  CHECK(safe == expected);
}

TEST_CASE("contour levels") {
  ScalarField top = ScalarField::Constant(5, 5, 1.0);
  top(0, 0) = 0.01;
  top(4, 4) = 100.0;
  top(2, 2) = kInf;
  const auto lin = default_contour_levels(islands_scenario(0.3, 5), top);
  const auto log = default_contour_levels(eight_block_scenario(5), top);
  REQUIRE(lin.size() == 12);
  REQUIRE(log.size() == 12);
  CHECK(lin[1] - lin[0] == doctest::Approx(lin[11] - lin[10]));
  CHECK(log[1] / log[0] == doctest::Approx(log[11] / log[10]));
  CHECK(std::is_sorted(lin.begin(), lin.end()));
  CHECK(std::is_sorted(log.begin(), log.end()));
}

TEST_CASE("run_scenario writes the requested artifacts") {
  const auto dir = scratch_dir("artifacts");
  RunOptions o;
  o.out_dir = dir.string();
  ScenarioConfig c = islands_scenario(0.5, 61);
  const ScenarioBundle b = run_scenario(c, o);
  for (const char* f : {"scenario.json", "w2.txt", "w1_top.txt", "log.csv", "contour_levels.csv", "paths.csv"}) {
    CAPTURE(f);
    CHECK(std::filesystem::exists(dir / f));
  }
  CHECK_FALSE(std::filesystem::exists(dir / "w1.txt"));
  CHECK_FALSE(b.errors.has_value());
  CHECK(b.files.size() >= 6);
  CHECK(load_scenario((dir / "scenario.json").string()).budget == c.budget);
  std::filesystem::remove_all(dir);
}

TEST_CASE("islands paths change with the budget") {
  const ScenarioBundle low = run_scenario(islands_scenario(0.3));
  const ScenarioBundle high = run_scenario(islands_scenario(0.5));
  REQUIRE(low.paths.front().reached);
  REQUIRE(high.paths.front().reached);
  CHECK(low.replays.front().feasible);
  CHECK(high.replays.front().feasible);
  // The low budget detours along the lower bar, far from the direct line.
  CHECK(polyline_gap(low.paths.front(), high.paths.front()) > 0.2);
  CHECK(high.paths.front().cost < low.paths.front().cost);
}

TEST_CASE("visibility path shortens with the budget") {
  const ScenarioBundle low = run_scenario(visibility_scenario(0.15));
  const ScenarioBundle high = run_scenario(visibility_scenario(0.3));
  REQUIRE(low.paths.front().reached);
  REQUIRE(high.paths.front().reached);
  CHECK(low.replays.front().feasible);
  CHECK(high.replays.front().feasible);
  CHECK(high.replays.front().length < low.replays.front().length);
}

TEST_CASE("catalog invariants on coarse grids") {
  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    ScenarioConfig c = builtin_scenario(name);
    c.grid_size = 81;
    const ScenarioBundle b = run_scenario(c);
    REQUIRE(b.solution.converged);
    // The 3h bound is in distance units; values are costs, so it scales
    // with the largest cost per unit distance.
    const CoefficientBounds cb = coefficient_bounds(b.raster.grid);
    const double slack = 3 * b.raster.grid.h * cb.cost_max / cb.speed_min;
    for (const IterationRecord& r : b.solution.log) {
      CAPTURE(r.iteration);
      CHECK(r.w_increase <= 1e-12);
      CHECK(r.v_increase <= 1e-12);
      CHECK(r.lost_safe == 0);
      CHECK(r.budget_increase <= 1e-12);
      CHECK(r.below_unconstrained <= slack);
    }
    for (std::size_t k = 0; k < b.paths.size(); ++k) {
      if (b.paths[k].points.size() < 2) continue;
      CHECK(b.replays[k].feasible);
    }
  }
}

TEST_CASE("shipped scenario files match the built-in catalog") {
  for (const std::string& name : builtin_scenario_names()) {
    CAPTURE(name);
    const std::string path = std::string(BUDGETPATH_SCENARIO_DIR) + "/" + name + ".json";
    REQUIRE(std::filesystem::exists(path));
    CHECK(dump_scenario(load_scenario(path)) == dump_scenario(builtin_scenario(name)));
  }
}
