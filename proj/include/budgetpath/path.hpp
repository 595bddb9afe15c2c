#pragma once

#include <iosfwd>
#include <vector>

#include "budgetpath/budget_reset.hpp"
#include "budgetpath/scenario.hpp"

namespace budgetpath {

struct PathPoint {
  double x, y, b, t;
};

struct PathTrace {
  std::vector<PathPoint> points;
  bool reached = false;
  double step = 0.0;  // time step in S
  double cost = 0.0;  // integral of K plus the exit cost
  double start_value = 0.0;
};

/// W at a point and budget: bilinear in space with the mixed convention
/// (unsafe corners read W1, safe corners read W2) and linear in b. +inf when
/// the cell touches an obstacle or leaves the grid.
double sample_value(const BudgetResetSolution& solution, const Grid2D& grid, Vec2 p, double b);

/// Forward Euler rollout of the sampled feedback control. Steps in S last
/// h / (2 max f). Steps in U last db / K-hat and spend exactly one budget
/// slice, the same update the solver uses, so a finite value always has a
/// finite successor. The budget resets to B in S.
/// Throws std::invalid_argument for an infeasible start and std::runtime_error
/// when the time cap (B / min K-hat + max W2 / min K) * 1.5 is hit.
PathTrace extract_path(const BudgetResetSolution& solution, const Grid2D& grid, Vec2 start, double b0,
                       const ControlSampling& controls = {});

/// Writes "x,y,b,t".
void write_path_csv(std::ostream& out, const PathTrace& path);

struct ReplayReport {
  bool feasible = false;
  bool hits_obstacle = false;
  double max_spent = 0.0;  // largest budget used on one excursion into U
  int resets = 0;          // entries into S
  double length = 0.0;
  double time = 0.0;
};

/// Re-walks a path against the scenario geometry alone: classification from
/// the regions and the observer, speed from the speed spec. Feasible when no
/// obstacle is crossed and every excursion into U spends at most B + slack.
/// Positions are resolved to one grid spacing h: points within h of S count
/// as safe and obstacles are shrunk by h.
/// A start in U has already spent B minus its recorded budget.
ReplayReport replay_path(const ScenarioConfig& config, const std::vector<PathPoint>& points,
                         double slack);

}  // namespace budgetpath
