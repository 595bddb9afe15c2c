#pragma once

#include <random>

#include "budgetpath/graph.hpp"

namespace fixtures {

// Eight-node example. Nodes x1..x8 are ids 0..7, the target is id 8. Safe: x1, x2, x7.
inline budgetpath::DirectedGraph example_graph(budgetpath::ResetMode mode, int B = 3) {
  using budgetpath::ResetMode;
  budgetpath::DirectedGraph g(9, 8);
  const bool safe[8] = {true, true, false, false, false, false, true, false};
  for (int i = 0; i < 8; ++i) g.set_safe(i, safe[i]);
  const int safe_cost = mode == ResetMode::kReset ? -B : 0;
  auto arc = [&](int i, int j, double C) { g.add_arc(i - 1, j - 1, C, safe[i - 1] ? safe_cost : 1); };
  arc(1, 2, 1);
  arc(1, 6, 7);
  arc(2, 3, 1);
  arc(2, 1, 1);
  arc(3, 4, 1);
  arc(3, 2, 1);
  arc(3, 6, 4);
  arc(4, 5, 1);
  arc(4, 3, 1);
  arc(5, 6, 1);
  arc(5, 8, 4);
  arc(6, 7, 1);
  arc(7, 8, 1);
  arc(8, 9, 1);
  return g;
}

// Random graph with a safe/unsafe labelling and the costs of `mode`.
inline budgetpath::DirectedGraph random_graph(std::mt19937_64& rng, int m, int B,
                                              budgetpath::ResetMode mode, double arc_density = 0.12,
                                              int max_resource = 3) {
  using budgetpath::ResetMode;
  budgetpath::DirectedGraph g(m + 1, m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> cost(1, 9);
  std::uniform_int_distribution<int> resource(1, max_resource);
  for (int i = 0; i < m; ++i) g.set_safe(i, unit(rng) < 0.35);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= m; ++j) {
      if (i == j) continue;
      const double p = j == m ? 0.08 : arc_density;
      if (unit(rng) >= p) continue;
      int c = resource(rng);
      if (g.is_safe(i)) c = mode == ResetMode::kReset ? -B : 0;
      g.add_arc(i, j, cost(rng), c);
    }
  }
  return g;
}

}  // namespace fixtures
