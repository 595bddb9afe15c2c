#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "budgetpath/common.hpp"

namespace budgetpath {

struct Arc {
  int to;
  double cost;   // primary cost C_ij
  int resource;  // secondary cost c_ij
};

/// Directed graph with an absorbing target, arc cost pairs and a safe/unsafe
/// labelling of the non-target nodes. Node ids are 0-based internally.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  /// `size` counts every node including the target.
  DirectedGraph(int size, int target);

  int size() const { return static_cast<int>(adjacency_.size()); }
  int target() const { return target_; }

  void add_arc(int from, int to, double cost, int resource);
  void remove_arc(int from, int to);
  std::span<const Arc> arcs(int node) const { return adjacency_[node]; }
  std::span<Arc> arcs(int node) { return adjacency_[node]; }

  void set_safe(int node, bool safe);
  bool is_safe(int node) const { return safe_[node]; }
  int safe_count() const;
  int unsafe_count() const { return size() - 1 - safe_count(); }

  /// Largest out-degree (the sparsity bound kappa).
  int max_out_degree() const;

 private:
  int target_ = 0;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<bool> safe_;
};

struct BudgetLevels {
  int max_budget = 0;
  int count() const { return max_budget + 1; }
};

enum class ResetMode {
  kGeneral,  // arbitrary integer secondary costs, capped by ominus
  kNoReset,  // safe arcs cost 0, unsafe arcs cost >= 1
  kReset,    // safe arcs cost -B, unsafe arcs cost >= 1
};

/// Left-associative capped subtraction: min(alpha - beta, B).
constexpr int ominus(int alpha, int beta, int max_budget) {
  const int d = alpha - beta;
  return d < max_budget ? d : max_budget;
}

/// Throws std::invalid_argument when the secondary costs do not follow the
/// convention of `mode` for the given budget.
void check_cost_convention(const DirectedGraph& graph, ResetMode mode, int max_budget);

/// Copy of `graph` whose safe arcs carry 0 (no reset) or -B (reset).
DirectedGraph with_safe_costs(const DirectedGraph& graph, ResetMode mode, int max_budget);

/// Minimal primary cost to the target; +inf where unreachable.
Eigen::VectorXd dijkstra(const DirectedGraph& graph);

/// Dense Bellman-Ford reference used by tests.
Eigen::VectorXd bellman_ford(const DirectedGraph& graph);

/// Expanded state (node, budget level).
struct ExpandedState {
  int node;
  int level;
};

struct ExpandedArc {
  int to;
  double cost;
};

/// Adjacency of the expanded graph. In no-reset modes, node (i,b) sits at
/// i*(B+1)+b and the shared target follows the last slice. In reset mode
/// safe nodes come first (one per node, level B), then unsafe nodes at
/// levels 1..B, then the target.
struct ExpandedGraph {
  ResetMode mode = ResetMode::kGeneral;
  int max_budget = 0;
  std::vector<ExpandedState> states;
  std::vector<std::vector<ExpandedArc>> adjacency;
  std::vector<int> index;  // (node * (B+1) + level) -> expanded id, -1 if absent
  int target = -1;

  int size() const { return static_cast<int>(states.size()); }
  int id(int node, int level) const { return index[node * (max_budget + 1) + level]; }
};

ExpandedGraph build_expanded_graph(const DirectedGraph& graph, BudgetLevels levels,
                                   ResetMode mode);

/// Values over (node, level). Reset-mode safe rows hold one value repeated at
/// every level since leaving a safe node always restores the full budget.
struct ExpandedValueTable {
  Eigen::MatrixXd values;  // rows: nodes, cols: levels 0..B
  double operator()(int node, int level) const { return values(node, level); }
  int max_budget() const { return static_cast<int>(values.cols()) - 1; }
};

/// Shortest distances to the target on an expanded graph.
Eigen::VectorXd expanded_dijkstra(const ExpandedGraph& expanded);

/// Text I/O. Header "M target B", arcs "i j C c", then "safe i1 i2 ...".
/// Node ids in files are 1-based.
struct GraphFile {
  DirectedGraph graph;
  int max_budget = 0;
};
GraphFile read_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const DirectedGraph& graph, int max_budget);

/// Writes "node level value" triples, 1-based node ids, "inf" for +inf.
void write_value_table(std::ostream& out, const ExpandedValueTable& table);

}  // namespace budgetpath
