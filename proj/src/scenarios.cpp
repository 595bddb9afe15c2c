#include "budgetpath/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "budgetpath/contour.hpp"
#include "budgetpath/detail/text.hpp"
#include "budgetpath/field_io.hpp"

namespace budgetpath {

namespace {

std::vector<Region> island_set() {
  return {
      Region::rect(-0.85, -0.55, -0.55, -0.28),  // holds the target
      Region::rect(-0.35, -0.75, 0.55, -0.45),   // bar below the direct line
      Region::rect(0.75, -0.60, 0.95, 0.28),     // bar next to the start
      Region::rect(-0.14, -0.10, 0.40, 0.30),    // on the direct line, gaps near 0.45
  };
}

ScenarioConfig islands_base(const std::string& name, double budget, int n) {
  ScenarioConfig c;
  c.name = name;
  c.reconstruction = true;
  c.note = "island layout reconstructed; every gap is at least 0.04 from each budget";
  c.grid_size = n;
  c.budget = budget;
  c.safe = island_set();
  c.target.point = Vec2(-0.7, -0.4);
  c.starts = {Vec2(0.8, 0.5)};
  return c;
}

std::string budget_suffix(double b) {
  std::string s = std::to_string(b);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

ScenarioConfig eight_block_scenario(int n) {
  ScenarioConfig c;
  c.name = "eight-block";
  c.note = "squares of side 0.4 with gaps 0.1, S1 centred on the target";
  c.grid_size = n;
  c.budget = 1.5;
  const double lo[3] = {-0.7, -0.2, 0.3};
  // Counter-clockwise from the bottom-left square.
  const int ring[8][2] = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  for (const auto& r : ring) {
    c.safe.push_back(Region::rect(lo[r[0]], lo[r[1]], lo[r[0]] + 0.4, lo[r[1]] + 0.4));
  }
  c.speed.base = 0.1;
  c.speed.safe = 10.0;
  // Corridors C1..C7: the gap between consecutive squares. C8 keeps the slow speed.
  for (int k = 0; k < 7; ++k) {
    const double* a = c.safe[k].p;
    const double* b = c.safe[k + 1].p;
    const Region gap = a[1] == b[1] ? Region::rect(std::min(a[2], b[2]), a[1], std::max(a[0], b[0]), a[3])
                                    : Region::rect(a[0], std::min(a[3], b[3]), a[2], std::max(a[1], b[1]));
    c.speed.regions.push_back({gap, 10.0});
  }
  c.target.point = Vec2(-0.5, -0.5);
  c.starts = {Vec2(-0.5, 0.0), Vec2(0.5, 0.5), Vec2(-0.5, -0.25)};
  return c;
}

ScenarioConfig islands_scenario(double budget, int n) {
  return islands_base("islands-B" + budget_suffix(budget), budget, n);
}

ScenarioConfig islands_slow_safe_scenario(int n) {
  ScenarioConfig c = islands_base("islands-slow-safe", 0.4, n);
  c.speed.safe = 0.3;
  return c;
}

ScenarioConfig islands_sinusoid_scenario(int n) {
  // Crossing times between islands spread out under this speed; B = 0.25
  // keeps every gap at least 0.04 away from the budget.
  ScenarioConfig c = islands_base("islands-sinusoid", 0.25, n);
  c.speed.formula = "sinusoid";
  return c;
}

ScenarioConfig visibility_scenario(double budget, int n) {
  ScenarioConfig c;
  c.name = "visibility-B" + budget_suffix(budget);
  c.reconstruction = true;
  c.note = "obstacle layout reconstructed around a fixed observer";
  c.grid_size = n;
  c.budget = budget;
  const Vec2 eye(0.8, 0.8);
  c.observer = eye;
  auto polar = [&](double deg, double r) {
    const double a = deg * std::numbers::pi / 180.0;
    return Vec2(eye.x() + r * std::cos(a), eye.y() + r * std::sin(a));
  };
  // Two large foreground occluders leave a visible corridor around 225 degrees;
  // two small background ones cast stepping-stone shadows far down it.
  const Vec2 f1 = polar(202.0, 0.65), f2 = polar(248.0, 0.65);
  const Vec2 b1 = polar(220.0, 1.3), b2 = polar(230.0, 1.3);
  c.obstacles = {Region::circle(f1.x(), f1.y(), 0.15), Region::circle(f2.x(), f2.y(), 0.15),
                 Region::circle(b1.x(), b1.y(), 0.06), Region::circle(b2.x(), b2.y(), 0.06)};
  const Vec2 t = polar(245.0, 0.95);
  c.target.kind = TargetSpec::Kind::kRegion;
  c.target.region = Region::rect(t.x() - 0.04, t.y() - 0.04, t.x() + 0.04, t.y() + 0.04);
  c.starts = {polar(205.0, 0.95)};
  return c;
}

std::vector<std::string> builtin_scenario_names() {
  return {"convergence",   "eight-block",     "islands-slow-safe", "islands-sinusoid", "islands-B0.3",
          "islands-B0.4",  "islands-B0.5",    "visibility-B0.15",  "visibility-B0.3"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "convergence") return convergence_scenario(121);
  if (name == "eight-block") return eight_block_scenario();
  if (name == "islands-slow-safe") return islands_slow_safe_scenario();
  if (name == "islands-sinusoid") return islands_sinusoid_scenario();
  if (name == "islands-B0.3") return islands_scenario(0.3);
  if (name == "islands-B0.4") return islands_scenario(0.4);
  if (name == "islands-B0.5") return islands_scenario(0.5);
  if (name == "visibility-B0.15") return visibility_scenario(0.15);
  if (name == "visibility-B0.3") return visibility_scenario(0.3);
  throw std::invalid_argument("unknown scenario: " + name);
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_scenario(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
  throw std::invalid_argument("unknown scenario: " + name_or_path);
}

std::vector<double> default_contour_levels(const ScenarioConfig& config, const ScalarField& top) {
  double lo = kInf, hi = 0.0;
  for (double v : top.reshaped()) {
    if (!is_finite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> levels;
  if (!is_finite(lo) || hi <= lo) return levels;
  constexpr int kCount = 12;
  if (config.name == "eight-block") {
    const double a = std::log(std::max(lo, hi * 1e-3)), b = std::log(hi);
    for (int k = 1; k <= kCount; ++k) levels.push_back(std::exp(a + (b - a) * k / (kCount + 1)));
  } else {
    for (int k = 1; k <= kCount; ++k) levels.push_back(lo + (hi - lo) * k / (kCount + 1));
  }
  return levels;
}

double replay_slack(const Grid2D& grid) {
  const CoefficientBounds b = coefficient_bounds(grid);
  return 2.0 * grid.h * b.rate_max / b.speed_min;
}

ScenarioBundle run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioBundle out;
  out.config = config;
  out.raster = rasterize_scenario(config);
  const Grid2D& g = out.raster.grid;
  SolveOptions solve = options.solve;
  solve.controls.directions = config.controls;
  solve.tolerance = config.tolerance;
  solve.max_iterations = config.max_iterations;
  out.solution = solve_budget_reset(g, out.raster.axis, solve);

  const double slack = replay_slack(g);
  for (const Vec2& start : config.starts) {
    PathTrace p;
    if (is_finite(sample_value(out.solution, g, start, config.budget))) {
      p = extract_path(out.solution, g, start, config.budget, solve.controls);
    }
    out.replays.push_back(replay_path(config, p.points, slack));
    out.paths.push_back(std::move(p));
  }
  if (options.oracle && config.name == "convergence") {
    ErrorReport e = convergence_errors(g, out.raster.axis, out.solution.w1, out.solution.w2);
    e.n = config.grid_size;
    e.iterations = static_cast<int>(out.solution.log.size());
    for (const IterationRecord& r : out.solution.log) e.seconds += r.seconds;
    out.errors = e;
  }
  const ScalarField top = out.solution.top(g);
  out.contour_levels = options.contour_levels.empty() ? default_contour_levels(config, top) : options.contour_levels;

  if (options.out_dir.empty()) return out;
  std::filesystem::create_directories(options.out_dir);
  auto add = [&](const std::string& name) {
    out.files.push_back(join(options.out_dir, name));
    return out.files.back();
  };
  save_scenario(add("scenario.json"), config);
  const double B = config.budget;
  if (options.emit.w2) write_field_file(add("w2.txt"), out.solution.w2, g.h, B);
  if (options.emit.w1_top) write_field_file(add("w1_top.txt"), out.solution.w1.slices.back(), g.h, B);
  if (options.emit.w1_full) {
    write_field_file(add("w1.txt"), {g.n, g.h, B, out.solution.w1.levels()}, out.solution.w1.slices);
  }
  if (options.emit.log) {
    std::ofstream f(add("log.csv"));
    write_iteration_log(f, out.solution.log);
  }
  if (options.emit.contours) {
    std::ofstream idx(add("contour_levels.csv"));
    idx << "index,level,file\n";
    for (std::size_t k = 0; k < out.contour_levels.size(); ++k) {
      const std::string name = "contour_" + std::to_string(k) + ".csv";
      idx << k << ',' << detail::format_number(out.contour_levels[k]) << ',' << name << '\n';
      std::ofstream f(add(name));
      write_contour_csv(f, extract_contour(top, g.h, out.contour_levels[k]));
    }
  }
  if (options.emit.paths) {
    std::ofstream idx(add("paths.csv"));
    idx << "index,start_x,start_y,reached,cost,start_value,feasible,max_spent,resets,length,file\n";
    for (std::size_t k = 0; k < out.paths.size(); ++k) {
      const std::string name = "path_" + std::to_string(k) + ".csv";
      const PathTrace& p = out.paths[k];
      const ReplayReport& r = out.replays[k];
      idx << k << ',' << config.starts[k].x() << ',' << config.starts[k].y() << ',' << p.reached << ','
          << p.cost << ',' << detail::format_number(p.start_value) << ',' << r.feasible << ',' << r.max_spent
          << ',' << r.resets << ',' << r.length << ',' << name << '\n';
      std::ofstream f(add(name));
      write_path_csv(f, p);
    }
  }
  if (out.errors) {
    std::ofstream f(add("errors.csv"));
    const ErrorReport& e = *out.errors;
    f << "n,l1,linf_3h,linf_01,mismatched,compared,iterations,seconds\n"
      << e.n << ',' << e.l1 << ',' << e.linf_3h << ',' << e.linf_01 << ',' << e.mismatched << ','
      << e.compared << ',' << e.iterations << ',' << e.seconds << '\n';
  }
  return out;
}

}  // namespace budgetpath
