#pragma once

#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace budgetpath::detail {

/// Binary-heap Dijkstra from arbitrary initial keys. `predecessors(v, relax)`
/// must call `relax(u, w)` for every arc u -> v of weight w >= 0. Among equal
/// keys the lowest node index is settled first.
template <class Predecessors>
Eigen::VectorXd label_setting(Eigen::VectorXd keys, Predecessors&& predecessors) {
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const int n = static_cast<int>(keys.size());
  for (int v = 0; v < n; ++v) {
    if (keys[v] < std::numeric_limits<double>::infinity()) heap.emplace(keys[v], v);
  }
  std::vector<char> settled(n, 0);
  while (!heap.empty()) {
    const auto [value, v] = heap.top();
    heap.pop();
    if (settled[v] || value > keys[v]) continue;
    settled[v] = 1;
    predecessors(v, [&](int u, double w) {
      if (settled[u]) return;
      const double candidate = value + w;
      if (candidate < keys[u]) {
        keys[u] = candidate;
        heap.emplace(candidate, u);
      }
    });
  }
  return keys;
}

}  // namespace budgetpath::detail
