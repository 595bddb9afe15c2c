#pragma once

#include <iosfwd>
#include <vector>

#include "budgetpath/budget_reset.hpp"
#include "budgetpath/grid.hpp"
#include "budgetpath/scenario.hpp"

namespace budgetpath {

/// 4-connected components of the safe points that can carry a value: safe-side
/// points except fixed points with infinite q. Other points get label -1.
struct SafeComponents {
  std::vector<int> label;  // size n*n, indexed i + j*n
  int count = 0;
};
SafeComponents label_safe_components(const Grid2D& grid);

/// Componentwise minimum: 0 on a component holding a point with finite q,
/// otherwise the smallest `gamma_data` entry <= budget over the unsafe points
/// 4-adjacent to it, otherwise +inf. Unsafe and obstacle entries are +inf.
ScalarField propagate_safe_component_min(const Grid2D& grid, const SafeComponents& components,
                                         const ScalarField& gamma_data, double budget);
ScalarField propagate_safe_component_min(const Grid2D& grid, const ScalarField& gamma_data,
                                         double budget);

struct ReachabilityRecord {
  int iteration = 0;
  int components_reached = 0;
  long reachable_safe = 0;    // points with finite G
  long reachable_unsafe = 0;  // unsafe points with V <= B
  double seconds = 0.0;
};

struct ReachabilitySolution {
  ScalarField v;  // minimal feasible level
  ScalarField g;  // auxiliary function; S_R = {g < inf}
  int components = 0;
  std::vector<ReachabilityRecord> log;
  bool converged = false;
  int iterations() const { return static_cast<int>(log.size()); }
};

/// Alternates the minimal-feasible-level solve with the componentwise minimum
/// until V on U and the reachable safe points next to U stop changing, which
/// is everything the next iteration reads. Works on N x N fields only.
ReachabilitySolution solve_reachability(const Grid2D& grid, double budget, int max_iterations = 100);

/// Rasterizes and solves with the budget and iteration cap of the config.
ReachabilitySolution solve_reachability(const ScenarioConfig& config, bool iteration_cap_error = false);

/// Writes "iteration,components_reached,reachable_safe,reachable_unsafe,seconds".
void write_reachability_log(std::ostream& out, const std::vector<ReachabilityRecord>& log);

/// Set differences between the reachable sets of the two algorithms.
struct ReachabilityComparison {
  long safe_mismatch = 0;    // safe-side points with finite G xor finite W2
  long unsafe_mismatch = 0;  // (unsafe point, level) with V <= b xor finite W1, outside the band
  long band = 0;             // (unsafe point, level) pairs skipped, |V - b| <= db
};
ReachabilityComparison compare_reachable_sets(const Grid2D& grid, const ReachabilitySolution& reach,
                                              const BudgetResetSolution& solution);

}  // namespace budgetpath
