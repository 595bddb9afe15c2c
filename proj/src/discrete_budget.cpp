#include "budgetpath/discrete_budget.hpp"

#include <stdexcept>

#include "budgetpath/detail/label_setting.hpp"

namespace budgetpath {

namespace {

bool tight(double lhs, double rhs) {
  if (!is_finite(lhs) || !is_finite(rhs)) return false;
  const double scale = std::max(1.0, std::abs(rhs));
  return std::abs(lhs - rhs) <= 1e-12 * scale;
}

// Dijkstra toward `keys` sources over the arcs accepted by `keep(i, arc)`,
// using `weight(arc)` as arc length.
template <class Keep, class Weight>
Eigen::VectorXd restricted_dijkstra(const DirectedGraph& graph, Eigen::VectorXd keys, Keep keep,
                                    Weight weight) {
  std::vector<std::vector<std::pair<int, double>>> rev(graph.size());
  for (int i = 0; i < graph.size(); ++i) {
    for (const Arc& a : graph.arcs(i)) {
      if (keep(i, a)) rev[a.to].emplace_back(i, weight(a));
    }
  }
  return detail::label_setting(std::move(keys), [&](int v, auto&& relax) {
    for (const auto& [u, w] : rev[v]) relax(u, w);
  });
}

}  // namespace

AuxiliaryNodeValues compute_auxiliaries(const DirectedGraph& graph,
                                        std::optional<Eigen::VectorXd> safe_values) {
  const int n = graph.size();
  const int t = graph.target();
  AuxiliaryNodeValues aux;
  aux.u = dijkstra(graph);
  const auto& U = aux.u;
  auto primary = [](const Arc& a) { return a.cost; };
  auto secondary = [](const Arc& a) { return static_cast<double>(a.resource); };

  if (!safe_values) {
    for (int i = 0; i < n; ++i) {
      for (const Arc& a : graph.arcs(i)) {
        if (a.resource < 0) throw std::invalid_argument("negative secondary cost");
      }
    }
    Eigen::VectorXd seed = Eigen::VectorXd::Constant(n, kInf);
    seed[t] = 0.0;
    aux.v = restricted_dijkstra(graph, seed, [](int, const Arc&) { return true; }, secondary);
    const auto& V = aux.v;
    aux.v_tilde = restricted_dijkstra(
        graph, seed, [&](int i, const Arc& a) { return tight(a.cost + U[a.to], U[i]); },
        secondary);
    aux.u_tilde = restricted_dijkstra(
        graph, seed, [&](int i, const Arc& a) { return tight(a.resource + V[a.to], V[i]); },
        primary);
    return aux;
  }

  const Eigen::VectorXd& W = *safe_values;
  auto unsafe = [&](int i) { return i != t && !graph.is_safe(i); };
  Eigen::VectorXd v_seed = Eigen::VectorXd::Constant(n, kInf);
  Eigen::VectorXd u_seed = Eigen::VectorXd::Constant(n, kInf);
  Eigen::VectorXd vt_seed = Eigen::VectorXd::Constant(n, kInf);
  v_seed[t] = u_seed[t] = vt_seed[t] = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == t || !graph.is_safe(j)) continue;
    vt_seed[j] = 0.0;
    if (is_finite(W[j])) {
      v_seed[j] = 0.0;
      u_seed[j] = W[j];
    }
  }
  aux.v = restricted_dijkstra(graph, v_seed, [&](int i, const Arc&) { return unsafe(i); },
                              secondary);
  const auto& V = aux.v;
  aux.u_tilde = restricted_dijkstra(
      graph, u_seed,
      [&](int i, const Arc& a) { return unsafe(i) && tight(a.resource + V[a.to], V[i]); },
      primary);
  aux.v_tilde = restricted_dijkstra(
      graph, vt_seed,
      [&](int i, const Arc& a) { return unsafe(i) && tight(a.cost + U[a.to], U[i]); },
      secondary);
  return aux;
}

NoResetSolution solve_no_reset(const DirectedGraph& graph, BudgetLevels levels) {
  const int n = graph.size();
  const int B = levels.max_budget;
  const int t = graph.target();
  if (B < 0) throw std::invalid_argument("budget must be nonnegative");
  bool explicit_causality = true;
  for (int i = 0; i < n; ++i) {
    for (const Arc& a : graph.arcs(i)) {
      if (a.resource < 0) throw std::invalid_argument("negative secondary cost");
      if (a.resource == 0) explicit_causality = false;
    }
  }

  // Zero-cost arcs keep the budget level, so they couple nodes within a slice.
  std::vector<std::vector<std::pair<int, double>>> flat(n);
  for (int i = 0; i < n; ++i) {
    for (const Arc& a : graph.arcs(i)) {
      if (a.resource == 0) flat[a.to].emplace_back(i, a.cost);
    }
  }

  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(n, B + 1, kInf);
  W.row(t).setZero();
  for (int b = 0; b <= B; ++b) {
    Eigen::VectorXd keys = Eigen::VectorXd::Constant(n, kInf);
    keys[t] = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == t) continue;
      for (const Arc& a : graph.arcs(i)) {
        if (a.resource == 0 || a.resource > b) continue;
        keys[i] = std::min(keys[i], a.cost + W(a.to, b - a.resource));
      }
    }
    if (!explicit_causality) {
      keys = detail::label_setting(std::move(keys), [&](int v, auto&& relax) {
        for (const auto& [u, w] : flat[v]) relax(u, w);
      });
    }
    W.col(b) = keys;
  }
  return {{W},
          explicit_causality ? SliceCausality::kExplicit : SliceCausality::kSemiImplicit};
}

ExpandedValueTable solve_reset_dijkstra(const DirectedGraph& graph, BudgetLevels levels) {
  const ExpandedGraph g = build_expanded_graph(graph, levels, ResetMode::kReset);
  const Eigen::VectorXd dist = expanded_dijkstra(g);
  const int B = levels.max_budget;
  Eigen::MatrixXd W(graph.size(), B + 1);
  for (int i = 0; i < graph.size(); ++i) {
    for (int b = 0; b <= B; ++b) {
      const int id = g.id(i, b);
      W(i, b) = id < 0 ? kInf : dist[id];
    }
  }
  return {W};
}

IterativeResetSolution solve_reset_iterative(const DirectedGraph& graph, BudgetLevels levels) {
  const int n = graph.size();
  const int B = levels.max_budget;
  const int t = graph.target();
  check_cost_convention(graph, ResetMode::kReset, B);
  auto safe = [&](int i) { return i != t && graph.is_safe(i); };

  // Safe nodes whose values feed the unsafe slices. Once these stop changing,
  // the next Phase I would repeat the current one exactly.
  std::vector<char> read_by_unsafe(n, 0);
  std::vector<std::vector<std::pair<int, double>>> safe_rev(n);
  for (int i = 0; i < n; ++i) {
    for (const Arc& a : graph.arcs(i)) {
      if (!safe(i) && safe(a.to)) read_by_unsafe[a.to] = 1;
      if (safe(i) && safe(a.to)) safe_rev[a.to].emplace_back(i, a.cost);
    }
  }

  IterativeResetSolution out;
  Eigen::VectorXd safe_values = Eigen::VectorXd::Constant(n, kInf);
  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(n, B + 1, kInf);
  while (true) {
    ++out.iterations;
    const AuxiliaryNodeValues aux = compute_auxiliaries(graph, safe_values);

    W.setConstant(kInf);
    W.row(t).setZero();
    for (int j = 0; j < n; ++j) {
      if (safe(j)) W.row(j).setConstant(safe_values[j]);
    }
    for (int b = 1; b <= B; ++b) {
      for (int i = 0; i < n; ++i) {
        if (i == t || safe(i)) continue;
        const double v = aux.v[i];
        if (!(v <= b)) continue;
        if (v == b) {
          W(i, b) = aux.u_tilde[i];
        } else if (W(i, b - 1) == aux.u[i]) {
          W(i, b) = aux.u[i];
        } else {
          double best = kInf;
          for (const Arc& a : graph.arcs(i)) {
            if (a.resource > b) continue;
            best = std::min(best, a.cost + W(a.to, b - a.resource));
          }
          W(i, b) = best;
        }
      }
    }

    Eigen::VectorXd keys = Eigen::VectorXd::Constant(n, kInf);
    for (int j = 0; j < n; ++j) {
      if (!safe(j)) continue;
      for (const Arc& a : graph.arcs(j)) {
        if (!safe(a.to)) keys[j] = std::min(keys[j], a.cost + W(a.to, ominus(B, a.resource, B)));
      }
    }
    Eigen::VectorXd next = detail::label_setting(std::move(keys), [&](int v, auto&& relax) {
      for (const auto& [u, w] : safe_rev[v]) relax(u, w);
    });

    bool settled = true;
    for (int j = 0; j < n; ++j) {
      if (!safe(j)) continue;
      if (read_by_unsafe[j] && next[j] != safe_values[j]) settled = false;
      W.row(j).setConstant(next[j]);
    }
    safe_values = next;
    out.safe_history.push_back(safe_values);
    out.table_history.push_back({W});
    if (settled) break;
  }
  out.table = {W};
  return out;
}

double monotonicity_violation(const ExpandedValueTable& table) {
  double worst = 0.0;
  const auto& W = table.values;
  for (int i = 0; i < W.rows(); ++i) {
    for (int b = 0; b + 1 < W.cols(); ++b) {
      const double lo = W(i, b), hi = W(i, b + 1);
      if (!is_finite(hi) && is_finite(lo)) return kInf;
      if (is_finite(hi) && hi > lo) worst = std::max(worst, hi - lo);
    }
  }
  return worst;
}

}  // namespace budgetpath
