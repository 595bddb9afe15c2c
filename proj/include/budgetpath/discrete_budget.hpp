#pragma once

#include <optional>

#include <Eigen/Core>

#include "budgetpath/graph.hpp"

namespace budgetpath {

/// Node-indexed auxiliary functions. In reset mode the safe entries hold the
/// boundary data the unsafe values are measured against: V = 0 and
/// Utilde = W^B on reachable safe nodes, +inf on the others, Vtilde = 0.
struct AuxiliaryNodeValues {
  Eigen::VectorXd u;        // primary-optimal cost
  Eigen::VectorXd v;        // resource-optimal cost (minimal starting budget)
  Eigen::VectorXd v_tilde;  // resource cost along primary-optimal paths
  Eigen::VectorXd u_tilde;  // primary cost along resource-optimal paths
};

/// No-reset auxiliaries when `safe_values` is empty. Otherwise reset mode:
/// `safe_values[j]` is the current W_j^B for safe j (ignored elsewhere), and
/// a safe node is a valid destination iff its value is finite.
AuxiliaryNodeValues compute_auxiliaries(const DirectedGraph& graph,
                                        std::optional<Eigen::VectorXd> safe_values = {});

enum class SliceCausality { kExplicit, kSemiImplicit };

struct NoResetSolution {
  ExpandedValueTable table;
  SliceCausality causality;
};

/// Slice-by-slice solver for nonnegative secondary costs.
NoResetSolution solve_no_reset(const DirectedGraph& graph, BudgetLevels levels);

/// Dijkstra on the full reset-mode expanded graph.
ExpandedValueTable solve_reset_dijkstra(const DirectedGraph& graph, BudgetLevels levels);

struct IterativeResetSolution {
  ExpandedValueTable table;
  int iterations = 0;
  /// Safe-node values after each outer iteration.
  std::vector<Eigen::VectorXd> safe_history;
  /// Full tables after each outer iteration.
  std::vector<ExpandedValueTable> table_history;
};

/// Alternating safe/unsafe iteration with minimal-feasible-level seeding.
IterativeResetSolution solve_reset_iterative(const DirectedGraph& graph, BudgetLevels levels);

/// Largest violation of W_i^b >= W_i^{b+1} over the table (0 when monotone).
double monotonicity_violation(const ExpandedValueTable& table);

}  // namespace budgetpath
