#pragma once

#include <optional>
#include <string>
#include <vector>

#include "budgetpath/budget_reset.hpp"
#include "budgetpath/oracle.hpp"
#include "budgetpath/path.hpp"
#include "budgetpath/scenario.hpp"

namespace budgetpath {

/// Eight safe squares of side 0.4 in a ring, fast belt except the last corridor.
ScenarioConfig eight_block_scenario(int n = 300);
/// Four rectangular safe islands, target (-0.7,-0.4), start (0.8,0.5), unit speed.
ScenarioConfig islands_scenario(double budget, int n = 201);
/// Islands with f = 1 on U and 0.3 on S, B = 0.4.
ScenarioConfig islands_slow_safe_scenario(int n = 201);
/// Islands with f = 1 - 0.5 sin(5 pi x) sin(5 pi y), B = 0.25.
ScenarioConfig islands_sinusoid_scenario(int n = 201);
/// Observer at (0.8,0.8) with four occluding obstacles; S is the shadow.
ScenarioConfig visibility_scenario(double budget, int n = 201);

std::vector<std::string> builtin_scenario_names();
/// Throws std::invalid_argument for an unknown name.
ScenarioConfig builtin_scenario(const std::string& name);
/// A built-in name, or else a path to a JSON config.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

struct EmitSet {
  bool w2 = true;
  bool w1_top = true;
  bool w1_full = false;
  bool contours = true;
  bool log = true;
  bool paths = true;
};

struct RunOptions {
  std::string out_dir;  // empty: nothing is written
  EmitSet emit;
  std::vector<double> contour_levels;  // empty: default_contour_levels
  bool oracle = false;                 // error report on the convergence scenario
  SolveOptions solve;                  // sampling, tolerance and cap come from the config
};

struct ScenarioBundle {
  ScenarioConfig config;
  RasterizedScenario raster;
  BudgetResetSolution solution;
  std::vector<PathTrace> paths;  // one per start; unreached when the start is infeasible
  std::vector<ReplayReport> replays;
  std::optional<ErrorReport> errors;
  std::vector<double> contour_levels;
  std::vector<std::string> files;
};

/// Twelve levels over the finite range of `top`: logarithmic for the
/// eight-block scenario, linear otherwise.
std::vector<double> default_contour_levels(const ScenarioConfig& config, const ScalarField& top);

/// Budget slack for replaying a path on this grid: 2 h K-hat_max / F_min.
double replay_slack(const Grid2D& grid);

/// Solves, extracts a path from every start at full budget, replays each
/// path against the geometry, and writes the requested artifacts.
ScenarioBundle run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace budgetpath
