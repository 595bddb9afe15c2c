#pragma once

#include <utility>
#include <vector>

#include "budgetpath/grid.hpp"

namespace budgetpath {

/// Local update of the first-order scheme. kFourPoint is the upwind quadratic
/// over the axis neighbours; kEightPoint is the semi-Lagrangian update over the
/// eight triangles formed by axis and diagonal neighbours (Tsitsiklis).
enum class EikonalStencil { kFourPoint, kEightPoint };

/// f |grad u| = K on the active points with Dirichlet data elsewhere.
/// Points that are neither active nor data are treated as absent.
struct EikonalProblem {
  int n = 0;
  double h = 0.0;
  std::vector<char> active;                  // size n*n, indexed i + j*n
  ScalarField speed;                         // f
  ScalarField cost;                          // K
  std::vector<std::pair<int, double>> data;  // point id -> value
  EikonalStencil stencil = EikonalStencil::kEightPoint;
  /// Optional obstacle mask; a diagonal step between two walls is not taken.
  std::vector<char> walls;
};

enum class EikonalMethod { kFastMarching, kFastSweeping };

/// Problem on the grid with no active points and no data, walls at obstacles.
EikonalProblem grid_problem(const Grid2D& grid, const ScalarField& cost);

ScalarField solve_eikonal(const EikonalProblem& problem,
                          EikonalMethod method = EikonalMethod::kFastMarching);

/// Unconstrained value: all non-obstacle points, data q at exit points.
ScalarField solve_unconstrained(const Grid2D& grid);

struct MflSolution {
  ScalarField v;        // minimal feasible level; 0 on reachable safe points
  ScalarField u_tilde;  // primary cost along the V-optimal characteristic
};

/// Solves f |grad V| = K-hat on the unsafe points with V = 0 on safe points
/// where `safe_values` is finite. Utilde is carried along the accepted
/// upwind stencil with data Utilde = safe_values.
MflSolution solve_mfl(const Grid2D& grid, const ScalarField& safe_values);

/// V only, for callers that never need Utilde.
ScalarField solve_mfl_value(const Grid2D& grid, const ScalarField& safe_values);

struct ControlSampling {
  int directions = 64;
  bool refine = true;  // golden-section pass around the best sample
};

struct SweepInputs {
  const Grid2D& grid;
  const BudgetAxis& axis;
  const ScalarField& w2_prev;  // read at safe corners
  const ScalarField& v;
  const ScalarField& u_tilde;
  const ScalarField& u;
  ControlSampling controls;
  bool early_exit = false;
  /// Previous iterate; when given, every slice value is capped by it before
  /// the next slice reads it.
  const BudgetField* cap = nullptr;
  /// Cap each slice by the one below so W1 is nonincreasing in b.
  bool budget_monotone = true;
};

/// Phase I slices on the unsafe points. Safe and obstacle entries are +inf;
/// their values come from `w2_prev`.
BudgetField sweep_budget_slices(const SweepInputs& in);

/// First slice index at or above V, or -1 when V exceeds the budget.
int minimal_feasible_slice(double v, const BudgetAxis& axis);

}  // namespace budgetpath
