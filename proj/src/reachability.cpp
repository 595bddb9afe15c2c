#include "budgetpath/reachability.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "budgetpath/eikonal.hpp"

namespace budgetpath {

namespace {

bool member(const Grid2D& g, int i, int j) {
  return g.safe_side(i, j) && !(g.fixed(i, j) && !is_finite(g.exit_cost(i, j)));
}

}  // namespace

SafeComponents label_safe_components(const Grid2D& g) {
  SafeComponents c;
  c.label.assign(g.points(), -1);
  std::vector<int> stack;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!member(g, i, j) || c.label[g.id(i, j)] >= 0) continue;
      const int id = c.count++;
      c.label[g.id(i, j)] = id;
      stack.push_back(g.id(i, j));
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int pi = p % g.n, pj = p / g.n;
        const int nb[4][2] = {{pi - 1, pj}, {pi + 1, pj}, {pi, pj - 1}, {pi, pj + 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= g.n || q[1] >= g.n) continue;
          const int qid = g.id(q[0], q[1]);
          if (c.label[qid] >= 0 || !member(g, q[0], q[1])) continue;
          c.label[qid] = id;
          stack.push_back(qid);
        }
      }
    }
  }
  return c;
}

ScalarField propagate_safe_component_min(const Grid2D& g, const SafeComponents& c,
                                         const ScalarField& gamma_data, double budget) {
  std::vector<double> value(c.count, kInf);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const int l = c.label[g.id(i, j)];
      if (l >= 0 && is_finite(g.exit_cost(i, j))) value[l] = 0.0;
    }
  }
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!g.unsafe(i, j)) continue;
      const double d = gamma_data(i, j);
      if (!(d <= budget * (1.0 + 1e-12))) continue;
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= g.n || q[1] >= g.n) continue;
        const int l = c.label[g.id(q[0], q[1])];
        if (l >= 0) value[l] = std::min(value[l], d);
      }
    }
  }
  ScalarField out = ScalarField::Constant(g.n, g.n, kInf);
  for (int k = 0; k < g.points(); ++k) {
    if (c.label[k] >= 0) out.data()[k] = value[c.label[k]];
  }
  return out;
}

ScalarField propagate_safe_component_min(const Grid2D& g, const ScalarField& gamma_data, double budget) {
  return propagate_safe_component_min(g, label_safe_components(g), gamma_data, budget);
}

ReachabilitySolution solve_reachability(const Grid2D& g, double budget, int max_iterations) {
  validate_grid(g);
  const SafeComponents comps = label_safe_components(g);
  ReachabilitySolution sol;
  sol.components = comps.count;
  sol.v = ScalarField::Constant(g.n, g.n, kInf);
  sol.g = ScalarField::Constant(g.n, g.n, kInf);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.fixed(i, j) && is_finite(g.exit_cost(i, j))) sol.v(i, j) = sol.g(i, j) = 0.0;
    }
  }
  // The next MFL solve reads V only through its values on U and G only through
  // which safe points next to U are reachable. When neither changes, every
  // later iterate repeats, so the loop stops there.
  std::vector<int> seeds_watch, unsafe_points;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.unsafe(i, j)) {
        unsafe_points.push_back(g.id(i, j));
        continue;
      }
      if (g.obstacle(i, j)) continue;
      bool next_to_u = false;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && jj >= 0 && ii < g.n && jj < g.n && g.unsafe(ii, jj)) next_to_u = true;
        }
      }
      if (next_to_u) seeds_watch.push_back(g.id(i, j));
    }
  }
  auto unchanged = [&](const ScalarField& v0, const ScalarField& v1, const ScalarField& g0, const ScalarField& g1) {
    for (int p : unsafe_points) {
      const double a = v0.data()[p], b = v1.data()[p];
      if (a != b && (is_finite(a) || is_finite(b))) return false;
    }
    for (int p : seeds_watch) {
      if (is_finite(g0.data()[p]) != is_finite(g1.data()[p])) return false;
    }
    return true;
  };

  for (int k = 1; k <= max_iterations; ++k) {
    const auto start = std::chrono::steady_clock::now();
    ScalarField v = solve_mfl_value(g, sol.g);
    ScalarField gk = propagate_safe_component_min(g, comps, v, budget);

    ReachabilityRecord r;
    r.iteration = k;
    std::vector<char> seen(comps.count, 0);
    for (int p = 0; p < g.points(); ++p) {
      const int i = p % g.n, j = p / g.n;
      if (is_finite(gk.data()[p])) {
        ++r.reachable_safe;
        if (comps.label[p] >= 0 && !seen[comps.label[p]]) {
          seen[comps.label[p]] = 1;
          ++r.components_reached;
        }
      } else if (g.unsafe(i, j) && v.data()[p] <= budget * (1.0 + 1e-12)) {
        ++r.reachable_unsafe;
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.log.push_back(r);

    const bool same = unchanged(sol.v, v, sol.g, gk);
    sol.v = std::move(v);
    sol.g = std::move(gk);
    if (same) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

ReachabilitySolution solve_reachability(const ScenarioConfig& config, bool iteration_cap_error) {
  const RasterizedScenario rs = rasterize_scenario(config);
  ReachabilitySolution sol = solve_reachability(rs.grid, config.budget, config.max_iterations);
  if (iteration_cap_error && !sol.converged) {
    throw std::runtime_error("reachability did not converge in " + std::to_string(config.max_iterations) +
                             " iterations");
  }
  return sol;
}

void write_reachability_log(std::ostream& out, const std::vector<ReachabilityRecord>& log) {
  out << "iteration,components_reached,reachable_safe,reachable_unsafe,seconds\n";
  for (const ReachabilityRecord& r : log) {
    out << r.iteration << ',' << r.components_reached << ',' << r.reachable_safe << ',' << r.reachable_unsafe
        << ',' << r.seconds << '\n';
  }
}

ReachabilityComparison compare_reachable_sets(const Grid2D& g, const ReachabilitySolution& reach,
                                              const BudgetResetSolution& s) {
  ReachabilityComparison c;
  const double db = s.axis.step;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.safe_side(i, j)) {
        if (is_finite(reach.g(i, j)) != is_finite(s.w2(i, j))) ++c.safe_mismatch;
      } else if (g.unsafe(i, j)) {
        const double v = reach.v(i, j);
        for (int lv = 0; lv < s.axis.levels; ++lv) {
          const double b = s.axis.level(lv);
          if (std::abs(v - b) <= db) {
            ++c.band;
            continue;
          }
          if ((v <= b) != is_finite(s.w1.slices[lv](i, j))) ++c.unsafe_mismatch;
        }
      }
    }
  }
  return c;
}

}  // namespace budgetpath
