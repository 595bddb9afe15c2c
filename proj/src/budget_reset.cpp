#include "budgetpath/budget_reset.hpp"

#include <chrono>
#include <ostream>
#include <stdexcept>

#include "budgetpath/detail/text.hpp"

namespace budgetpath {

double max_change(const ScalarField& prev, const ScalarField& next) {
  if (prev.rows() != next.rows() || prev.cols() != next.cols()) {
    throw std::invalid_argument("max_change: shape mismatch");
  }
  double m = 0.0;
  for (Eigen::Index k = 0; k < next.size(); ++k) {
    const double a = prev.data()[k], b = next.data()[k];
    if (!is_finite(a) && !is_finite(b)) continue;
    if (!is_finite(a) || !is_finite(b)) return kInf;
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

double max_change(const BudgetField& prev, const BudgetField& next) {
  if (prev.levels() != next.levels()) throw std::invalid_argument("max_change: level mismatch");
  double m = 0.0;
  for (int s = 0; s < next.levels(); ++s) m = std::max(m, max_change(prev.slices[s], next.slices[s]));
  return m;
}

double BudgetResetSolution::value(const Grid2D& grid, int i, int j, int level) const {
  if (grid.unsafe(i, j)) return w1.slices[level](i, j);
  return w2(i, j);
}

ScalarField BudgetResetSolution::top(const Grid2D& grid) const {
  ScalarField out = w2;
  const ScalarField& t = w1.slices.back();
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      if (grid.unsafe(i, j)) out(i, j) = t(i, j);
    }
  }
  return out;
}

namespace {

// Largest positive part of next - prev over points finite in next.
double rise(const ScalarField& prev, const ScalarField& next) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < next.size(); ++k) {
    const double a = prev.data()[k], b = next.data()[k];
    if (!is_finite(a)) continue;
    m = std::max(m, is_finite(b) ? b - a : kInf);
  }
  return m;
}

ScalarField phase_two(const Grid2D& g, const ScalarField& top) {
  EikonalProblem p = grid_problem(g, g.running_cost);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.obstacle(i, j)) continue;
      if (g.unsafe(i, j)) {
        if (g.gamma_adjacent(i, j) && is_finite(top(i, j))) p.data.emplace_back(g.id(i, j), top(i, j));
      } else if (g.fixed(i, j)) {
        if (is_finite(g.exit_cost(i, j))) p.data.emplace_back(g.id(i, j), g.exit_cost(i, j));
      } else {
        p.active[g.id(i, j)] = 1;
      }
    }
  }
  ScalarField w2 = solve_eikonal(p);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!g.safe_side(i, j)) w2(i, j) = kInf;
    }
  }
  return w2;
}

}  // namespace

BudgetResetSolution solve_budget_reset(const Grid2D& g, const BudgetAxis& axis,
                                       const SolveOptions& options) {
  validate_grid(g);
  const int n = g.n;
  BudgetResetSolution sol;
  sol.axis = axis;
  sol.u = solve_unconstrained(g);
  sol.w1.slices.assign(axis.levels, ScalarField::Constant(n, n, kInf));
  sol.w2 = ScalarField::Constant(n, n, kInf);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.fixed(i, j)) sol.w2(i, j) = g.exit_cost(i, j);
    }
  }
  sol.v = ScalarField::Constant(n, n, kInf);
  const bool has_unsafe = g.count(PointClass::kUnsafe) > 0;

  for (int k = 1; k <= options.max_iterations; ++k) {
    const auto start = std::chrono::steady_clock::now();
    MflSolution mfl = solve_mfl(g, sol.w2);
    BudgetField w1 = sweep_budget_slices({g, axis, sol.w2, mfl.v, mfl.u_tilde, sol.u, options.controls,
                                          options.early_exit, options.monotone ? &sol.w1 : nullptr,
                                          options.budget_monotone});
    ScalarField w2 = phase_two(g, w1.slices.back());
    if (options.monotone) w2 = w2.min(sol.w2);

    IterationRecord r;
    r.iteration = k;
    r.w1_change = max_change(sol.w1, w1);
    r.w2_change = max_change(sol.w2, w2);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (g.safe_side(i, j)) {
          if (is_finite(w2(i, j))) ++r.reachable_safe;
          else if (is_finite(sol.w2(i, j))) ++r.lost_safe;
          if (is_finite(w2(i, j))) r.below_unconstrained = std::max(r.below_unconstrained, sol.u(i, j) - w2(i, j));
        } else if (g.unsafe(i, j) && is_finite(w1.slices.back()(i, j))) {
          ++r.reachable_unsafe;
        }
      }
    }
    r.w_increase = rise(sol.w2, w2);
    for (int s = 0; s < axis.levels; ++s) {
      r.w_increase = std::max(r.w_increase, rise(sol.w1.slices[s], w1.slices[s]));
      if (s > 0) r.budget_increase = std::max(r.budget_increase, rise(w1.slices[s - 1], w1.slices[s]));
      const ScalarField& sl = w1.slices[s];
      for (Eigen::Index q = 0; q < sl.size(); ++q) {
        if (is_finite(sl.data()[q])) {
          r.below_unconstrained = std::max(r.below_unconstrained, sol.u.data()[q] - sl.data()[q]);
        }
      }
    }
    r.v_increase = k > 1 ? rise(sol.v, mfl.v) : 0.0;

    sol.w1 = std::move(w1);
    sol.w2 = std::move(w2);
    sol.v = std::move(mfl.v);
    sol.u_tilde = std::move(mfl.u_tilde);
    if (options.keep_w2_history) sol.w2_history.push_back(sol.w2);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    sol.log.push_back(r);
    if (options.on_iteration) options.on_iteration(r);

    if (!has_unsafe || (r.w1_change < options.tolerance && r.w2_change < options.tolerance)) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

BudgetResetSolution solve_budget_reset(const ScenarioConfig& config, bool iteration_cap_error) {
  const RasterizedScenario rs = rasterize_scenario(config);
  SolveOptions options;
  options.controls.directions = config.controls;
  options.tolerance = config.tolerance;
  options.max_iterations = config.max_iterations;
  BudgetResetSolution sol = solve_budget_reset(rs.grid, rs.axis, options);
  if (iteration_cap_error && !sol.converged) {
    throw std::runtime_error("budget reset solver did not converge in " +
                             std::to_string(config.max_iterations) + " iterations");
  }
  return sol;
}

void write_iteration_log(std::ostream& out, const std::vector<IterationRecord>& log) {
  out << "iteration,w1_change,w2_change,reachable_safe,reachable_unsafe,seconds\n";
  for (const IterationRecord& r : log) {
    out << r.iteration << ',' << detail::format_number(r.w1_change) << ',' << detail::format_number(r.w2_change) << ','
        << r.reachable_safe << ',' << r.reachable_unsafe << ',' << r.seconds << '\n';
  }
}

}  // namespace budgetpath
