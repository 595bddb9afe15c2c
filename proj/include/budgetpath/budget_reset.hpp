#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "budgetpath/eikonal.hpp"
#include "budgetpath/grid.hpp"
#include "budgetpath/scenario.hpp"

namespace budgetpath {

/// Sup-norm change between two iterates. Pairs that are both +inf count as 0,
/// pairs with exactly one +inf count as +inf.
double max_change(const ScalarField& prev, const ScalarField& next);
double max_change(const BudgetField& prev, const BudgetField& next);

struct IterationRecord {
  int iteration = 0;
  double w1_change = 0.0;
  double w2_change = 0.0;
  long reachable_safe = 0;    // safe-side points with finite W2
  long reachable_unsafe = 0;  // unsafe points with finite W1 at the top level
  double seconds = 0.0;
  // Diagnostics of the monotone structure, all 0 when it holds exactly.
  double w_increase = 0.0;       // max rise of W1 or W2 over the previous iterate
  double v_increase = 0.0;       // max rise of V over the previous iterate
  long lost_safe = 0;            // previously reachable safe points now unreachable
  double budget_increase = 0.0;  // max rise of W1 from one level to the next
  double below_unconstrained = 0.0;  // max of U - W over finite W
};

struct SolveOptions {
  ControlSampling controls;
  double tolerance = 1e-8;
  int max_iterations = 100;
  /// Copy U upward once a slice reaches it. Off by default: the discrete
  /// values can differ from U, so the rule is not a pure speed-up.
  bool early_exit = false;
  /// Cap each iterate by the previous one so values never rise across iterations.
  bool monotone = true;
  /// Cap each W1 slice by the slice below. Off gives the plain scheme, whose
  /// semi-Lagrangian step can sit above the MFL seed one level down.
  bool budget_monotone = true;
  /// Keep W2 after every iteration (for schedule studies).
  bool keep_w2_history = false;
  std::function<void(const IterationRecord&)> on_iteration;
};

struct BudgetResetSolution {
  BudgetAxis axis;
  BudgetField w1;
  ScalarField w2;  // safe-side values; +inf on unsafe and obstacle points
  ScalarField u;   // unconstrained value
  ScalarField v;   // minimal feasible level of the last iteration
  ScalarField u_tilde;
  std::vector<IterationRecord> log;
  std::vector<ScalarField> w2_history;
  bool converged = false;

  /// W at (point, level): W1 on unsafe points, W2 on the safe side.
  double value(const Grid2D& grid, int i, int j, int level) const;
  /// Top slice combined with W2, the value at full budget everywhere.
  ScalarField top(const Grid2D& grid) const;
};

/// Alternates the minimal-feasible-level solve, the upward budget sweep on
/// the unsafe points, and the eikonal solve on the safe points until both
/// sup-norm changes fall below the tolerance.
BudgetResetSolution solve_budget_reset(const Grid2D& grid, const BudgetAxis& axis,
                                       const SolveOptions& options = {});

/// Rasterizes and solves with the sampling, tolerance and cap of the config.
/// `iteration_cap_error` turns a missed tolerance into an exception.
BudgetResetSolution solve_budget_reset(const ScenarioConfig& config,
                                       bool iteration_cap_error = false);

/// Writes "iteration,w1_change,w2_change,reachable_safe,reachable_unsafe,seconds".
void write_iteration_log(std::ostream& out, const std::vector<IterationRecord>& log);

}  // namespace budgetpath
