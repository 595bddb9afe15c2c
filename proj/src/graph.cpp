#include "budgetpath/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "budgetpath/detail/label_setting.hpp"
#include "budgetpath/detail/text.hpp"

namespace budgetpath {

DirectedGraph::DirectedGraph(int size, int target)
    : target_(target), adjacency_(size), safe_(size, false) {
  if (size < 1 || target < 0 || target >= size) {
    throw std::invalid_argument("target id outside node range");
  }
}

void DirectedGraph::add_arc(int from, int to, double cost, int resource) {
  if (from < 0 || from >= size() || to < 0 || to >= size()) {
    throw std::invalid_argument("arc endpoint outside node range");
  }
  if (from == target_) throw std::invalid_argument("target must be absorbing");
  if (!(cost >= 0.0)) throw std::invalid_argument("primary costs must be nonnegative");
  for (const Arc& a : adjacency_[from]) {
    if (a.to == to) throw std::invalid_argument("parallel arcs are not supported");
  }
  adjacency_[from].push_back({to, cost, resource});
}

void DirectedGraph::remove_arc(int from, int to) {
  auto& list = adjacency_[from];
  list.erase(std::remove_if(list.begin(), list.end(), [to](const Arc& a) { return a.to == to; }),
             list.end());
}

void DirectedGraph::set_safe(int node, bool safe) {
  if (node == target_) throw std::invalid_argument("the target carries no safety label");
  safe_[node] = safe;
}

int DirectedGraph::safe_count() const {
  return static_cast<int>(std::count(safe_.begin(), safe_.end(), true));
}

int DirectedGraph::max_out_degree() const {
  std::size_t k = 0;
  for (const auto& list : adjacency_) k = std::max(k, list.size());
  return static_cast<int>(k);
}

void check_cost_convention(const DirectedGraph& graph, ResetMode mode, int max_budget) {
  if (mode == ResetMode::kGeneral) return;
  for (int i = 0; i < graph.size(); ++i) {
    if (i == graph.target()) continue;
    for (const Arc& a : graph.arcs(i)) {
      if (graph.is_safe(i)) {
        const int expected = mode == ResetMode::kReset ? -max_budget : 0;
        if (a.resource != expected) {
          throw std::invalid_argument("safe node " + std::to_string(i + 1) + " has secondary cost " +
                                      std::to_string(a.resource) + ", expected " +
                                      std::to_string(expected));
        }
      } else if (a.resource < 1) {
        throw std::invalid_argument("unsafe node " + std::to_string(i + 1) +
                                    " has secondary cost below 1");
      }
    }
  }
}

DirectedGraph with_safe_costs(const DirectedGraph& graph, ResetMode mode, int max_budget) {
  DirectedGraph out = graph;
  if (mode == ResetMode::kGeneral) return out;
  const int c = mode == ResetMode::kReset ? -max_budget : 0;
  for (int i = 0; i < out.size(); ++i) {
    if (i == out.target() || !out.is_safe(i)) continue;
    for (Arc& a : out.arcs(i)) a.resource = c;
  }
  return out;
}

namespace {

std::vector<std::vector<std::pair<int, double>>> reverse_lists(const DirectedGraph& graph) {
  std::vector<std::vector<std::pair<int, double>>> rev(graph.size());
  for (int i = 0; i < graph.size(); ++i) {
    for (const Arc& a : graph.arcs(i)) rev[a.to].emplace_back(i, a.cost);
  }
  return rev;
}

}  // namespace

Eigen::VectorXd dijkstra(const DirectedGraph& graph) {
  const auto rev = reverse_lists(graph);
  Eigen::VectorXd keys = Eigen::VectorXd::Constant(graph.size(), kInf);
  keys[graph.target()] = 0.0;
  return detail::label_setting(std::move(keys), [&](int v, auto&& relax) {
    for (const auto& [u, w] : rev[v]) relax(u, w);
  });
}

Eigen::VectorXd bellman_ford(const DirectedGraph& graph) {
  Eigen::VectorXd u = Eigen::VectorXd::Constant(graph.size(), kInf);
  u[graph.target()] = 0.0;
  for (int pass = 0; pass < graph.size(); ++pass) {
    bool changed = false;
    for (int i = 0; i < graph.size(); ++i) {
      for (const Arc& a : graph.arcs(i)) {
        if (a.cost + u[a.to] < u[i]) {
          u[i] = a.cost + u[a.to];
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return u;
}

ExpandedGraph build_expanded_graph(const DirectedGraph& graph, BudgetLevels levels,
                                   ResetMode mode) {
  const int B = levels.max_budget;
  if (B < 0) throw std::invalid_argument("budget must be nonnegative");
  check_cost_convention(graph, mode, B);

  ExpandedGraph g;
  g.mode = mode;
  g.max_budget = B;
  g.index.assign(static_cast<std::size_t>(graph.size()) * (B + 1), -1);
  auto add_state = [&](int node, int level) {
    g.index[node * (B + 1) + level] = g.size();
    g.states.push_back({node, level});
  };

  if (mode == ResetMode::kReset) {
    for (int i = 0; i < graph.size(); ++i) {
      if (i == graph.target() || !graph.is_safe(i)) continue;
      const int id = g.size();
      g.states.push_back({i, B});
      for (int b = 0; b <= B; ++b) g.index[i * (B + 1) + b] = id;
    }
    for (int i = 0; i < graph.size(); ++i) {
      if (i == graph.target() || graph.is_safe(i)) continue;
      for (int b = 1; b <= B; ++b) add_state(i, b);
    }
  } else {
    for (int i = 0; i < graph.size(); ++i) {
      if (i == graph.target()) continue;
      for (int b = 0; b <= B; ++b) add_state(i, b);
    }
  }
  g.target = g.size();
  g.states.push_back({graph.target(), B});
  for (int b = 0; b <= B; ++b) g.index[graph.target() * (B + 1) + b] = g.target;

  g.adjacency.resize(g.size());
  for (int s = 0; s < g.target; ++s) {
    const auto [i, b] = g.states[s];
    for (const Arc& a : graph.arcs(i)) {
      if (a.resource > b) continue;
      const int level = ominus(b, a.resource, B);
      const int to = g.id(a.to, level);
      if (to >= 0) g.adjacency[s].push_back({to, a.cost});
    }
  }
  return g;
}

Eigen::VectorXd expanded_dijkstra(const ExpandedGraph& expanded) {
  std::vector<std::vector<std::pair<int, double>>> rev(expanded.size());
  for (int s = 0; s < expanded.size(); ++s) {
    for (const ExpandedArc& a : expanded.adjacency[s]) rev[a.to].emplace_back(s, a.cost);
  }
  Eigen::VectorXd keys = Eigen::VectorXd::Constant(expanded.size(), kInf);
  keys[expanded.target] = 0.0;
  return detail::label_setting(std::move(keys), [&](int v, auto&& relax) {
    for (const auto& [u, w] : rev[v]) relax(u, w);
  });
}

namespace {

bool next_content_line(std::istream& in, std::istringstream& line) {
  std::string text;
  while (std::getline(in, text)) {
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(text);
    return true;
  }
  return false;
}

}  // namespace

GraphFile read_graph(std::istream& in) {
  std::istringstream line;
  if (!next_content_line(in, line)) throw std::runtime_error("graph file: missing header");
  int m = 0, target = 0, budget = 0;
  if (!(line >> m >> target >> budget) || m < 0 || target < 1 || target > m + 1 || budget < 0) {
    throw std::runtime_error("graph file: malformed header");
  }
  GraphFile out{DirectedGraph(m + 1, target - 1), budget};
  while (next_content_line(in, line)) {
    std::string first;
    line >> first;
    if (first == "safe") {
      int id = 0;
      while (line >> id) {
        if (id < 1 || id > m + 1) throw std::runtime_error("graph file: bad safe node id");
        out.graph.set_safe(id - 1, true);
      }
      continue;
    }
    int j = 0, c = 0;
    double cost = 0.0;
    if (!(line >> j >> cost >> c)) throw std::runtime_error("graph file: malformed arc line");
    const int i = std::stoi(first);
    out.graph.add_arc(i - 1, j - 1, cost, c);
  }
  return out;
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const DirectedGraph& graph, int max_budget) {
  out << graph.size() - 1 << ' ' << graph.target() + 1 << ' ' << max_budget << '\n';
  for (int i = 0; i < graph.size(); ++i) {
    for (const Arc& a : graph.arcs(i)) {
      out << i + 1 << ' ' << a.to + 1 << ' ' << detail::format_number(a.cost) << ' '
          << a.resource << '\n';
    }
  }
  out << "safe";
  for (int i = 0; i < graph.size(); ++i) {
    if (i != graph.target() && graph.is_safe(i)) out << ' ' << i + 1;
  }
  out << '\n';
}

void write_value_table(std::ostream& out, const ExpandedValueTable& table) {
  for (int i = 0; i < table.values.rows(); ++i) {
    for (int b = 0; b < table.values.cols(); ++b) {
      out << i + 1 << ' ' << b << ' ' << detail::format_number(table.values(i, b)) << '\n';
    }
  }
}

}  // namespace budgetpath
