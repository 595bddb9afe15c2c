#pragma once

#include <vector>

#include "budgetpath/budget_reset.hpp"
#include "budgetpath/scenario.hpp"

namespace budgetpath {

/// Exact value for the convergence problem: S = {x <= 1/3} plus the domain
/// boundary, target (1,0), unit speed and costs, B = 1. The boundary itself
/// carries +inf except at the target.
double exact_solution_oracle(double x, double y, double b);

/// Distance from (x, y) to the discontinuity set {p in U : |p - T| = b} of the
/// convergence problem; +inf when that set is empty.
double distance_to_discontinuity(double x, double y, double b);

/// Scenario of the convergence problem at grid size n with budget step h.
ScenarioConfig convergence_scenario(int n);

struct ErrorReport {
  int n = 0;
  double l1 = 0.0;               // h^2 db sum over extended points finite in both
  double linf_3h = 0.0;          // sup over points farther than 3h from the jump set
  double linf_01 = 0.0;          // same with a band of 0.1
  long mismatched = 0;           // extended points finite in exactly one of the two
  long compared = 0;
  int iterations = 0;
  double seconds = 0.0;
};

/// Error norms of a solution of the convergence problem against the oracle.
/// Safe-side points contribute W2 at every budget level.
ErrorReport convergence_errors(const Grid2D& grid, const BudgetAxis& axis, const BudgetField& w1,
                               const ScalarField& w2);

/// Solves the convergence problem for each size and reports the errors.
std::vector<ErrorReport> run_convergence_test(const std::vector<int>& sizes,
                                              const SolveOptions& options = {});

}  // namespace budgetpath
