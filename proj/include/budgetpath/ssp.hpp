#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "budgetpath/graph.hpp"

namespace budgetpath {

struct Transition {
  int to;
  double probability;
};

struct Control {
  double cost;   // primary cost C_i(a)
  int resource;  // secondary cost c_i(a)
  std::vector<Transition> transitions;
};

/// Stochastic shortest path model with an absorbing, cost-free target.
class SSPModel {
 public:
  SSPModel() = default;
  SSPModel(int size, int target, double min_cost);

  int size() const { return static_cast<int>(controls_.size()); }
  int target() const { return target_; }
  double min_cost() const { return min_cost_; }

  /// Validates the distribution (sums to 1 within 1e-12) and drops zero entries.
  void add_control(int node, Control control);
  std::span<const Control> controls(int node) const { return controls_[node]; }

  void set_safe(int node, bool safe);
  bool is_safe(int node) const { return safe_[node]; }

 private:
  int target_ = 0;
  double min_cost_ = 0.0;
  std::vector<std::vector<Control>> controls_;
  std::vector<bool> safe_;
};

/// Deterministic model with one control per arc.
SSPModel ssp_from_graph(const DirectedGraph& graph);

struct ValueIterationResult {
  Eigen::VectorXd values;
  std::vector<int> policy;  // control index per node, -1 where none applies
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Jacobi value iteration. States that cannot reach the target with
/// probability one under any policy are found by a graph fixpoint and set to
/// +inf; the rest start from 0 and increase monotonically.
ValueIterationResult value_iteration(const SSPModel& model, double tolerance,
                                     long max_iterations = 1'000'000);

enum class BudgetSSPMethod { kExplicitSweep, kPerSlice, kFullExpanded };

struct BudgetSSPResult {
  ExpandedValueTable table;
  BudgetSSPMethod method = BudgetSSPMethod::kExplicitSweep;
  long iterations = 0;
  bool converged = true;
};

BudgetSSPResult solve_budget_ssp(const SSPModel& model, BudgetLevels levels, double tolerance,
                                 long max_iterations = 1'000'000);

struct ResetSSPResult {
  ExpandedValueTable table;
  int iterations = 0;
  bool converged = false;
};

/// Alternates an upward sweep over unsafe slices with value iteration on the
/// safe nodes. Safe nodes use c = -B, unsafe nodes c >= 1.
ResetSSPResult solve_reset_ssp(const SSPModel& model, BudgetLevels levels, double tolerance,
                               int max_outer_iterations = 100'000);

/// Monolithic value iteration over the whole expanded state space.
ExpandedValueTable solve_expanded_ssp(const SSPModel& model, BudgetLevels levels, ResetMode mode,
                                      double tolerance, long max_iterations = 1'000'000);

struct PolicyEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of the expected cost of `policy` from `start`.
PolicyEstimate simulate_policy(const SSPModel& model, const std::vector<int>& policy, int start,
                               long episodes, std::mt19937_64& rng);

/// Text format: header "M target delta B", control lines
/// "i a C c j1 p1 j2 p2 ...", then "safe i1 i2 ...". Node ids are 1-based.
struct SSPFile {
  SSPModel model;
  int max_budget = 0;
};
SSPFile read_ssp(std::istream& in);
SSPFile read_ssp_file(const std::string& path);

}  // namespace budgetpath
