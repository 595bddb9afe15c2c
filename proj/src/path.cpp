#include "budgetpath/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace budgetpath {

namespace {

// W1 at an unsafe corner for budget b, linear between the bracketing slices.
double slice_value(const BudgetResetSolution& s, int i, int j, double b) {
  const BudgetAxis& ax = s.axis;
  if (b < -1e-12 * ax.max_budget) return kInf;
  const double r = std::clamp(b / ax.step, 0.0, static_cast<double>(ax.levels - 1));
  const int lo = std::min(static_cast<int>(std::floor(r)), ax.levels - 1);
  const double w = r - lo;
  const double a = s.w1.slices[lo](i, j);
  if (w <= 1e-12 || lo + 1 >= ax.levels) return a;
  const double c = s.w1.slices[lo + 1](i, j);
  return (1 - w) * a + w * c;
}

struct Coefficients {
  double f, k, rate;
  bool safe;
};

Coefficients nearest(const Grid2D& g, Vec2 p) {
  const int i = std::clamp(static_cast<int>(std::lround((p.x() + 1.0) / g.h)), 0, g.n - 1);
  const int j = std::clamp(static_cast<int>(std::lround((p.y() + 1.0) / g.h)), 0, g.n - 1);
  return {g.speed(i, j), g.running_cost(i, j), g.resource_rate(i, j), g.safe_side(i, j)};
}

struct Exit {
  Vec2 point;
  double value;  // straight-segment cost plus q
  double spend;  // budget used on the segment
};

// Cheapest direct exit to a gridpoint with finite q within `radius` of p.
std::optional<Exit> direct_exit(const Grid2D& g, Vec2 p, double radius, const Coefficients& c) {
  const int r = static_cast<int>(std::ceil(radius / g.h));
  const int ic = static_cast<int>(std::lround((p.x() + 1.0) / g.h));
  const int jc = static_cast<int>(std::lround((p.y() + 1.0) / g.h));
  std::optional<Exit> best;
  for (int j = std::max(0, jc - r); j <= std::min(g.n - 1, jc + r); ++j) {
    for (int i = std::max(0, ic - r); i <= std::min(g.n - 1, ic + r); ++i) {
      if (!is_finite(g.exit_cost(i, j))) continue;
      const double d = (g.point(i, j) - p).norm();
      if (d > radius) continue;
      const double v = d / c.f * c.k + g.exit_cost(i, j);
      if (!best || v < best->value) best = Exit{g.point(i, j), v, c.safe ? 0.0 : d / c.f * c.rate};
    }
  }
  return best;
}

// Bilinear sample of a plain field; +inf when the cell touches an obstacle.
double sample_field(const Grid2D& g, const ScalarField& field, Vec2 p) {
  const auto cell = locate(g.n, g.h, p.x(), p.y());
  if (!cell) return kInf;
  for (int dj = 0; dj <= 1; ++dj) {
    for (int di = 0; di <= 1; ++di) {
      if (g.obstacle(std::min(cell->i0 + di, g.n - 1), std::min(cell->j0 + dj, g.n - 1))) return kInf;
    }
  }
  return bilinear<double>(*cell, [&](int i, int j) { return field(i, j); });
}

}  // namespace

namespace {

// Mixed sample of W. With `lenient`, +inf corners are dropped and the
// remaining weights renormalized, which extends W by one cell past the edge
// of its finite region.
double mixed_sample(const BudgetResetSolution& solution, const Grid2D& grid, Vec2 p, double b, bool lenient) {
  const auto cell = locate(grid.n, grid.h, p.x(), p.y());
  if (!cell) return kInf;
  double sum = 0.0, weight = 0.0;
  for (int dj = 0; dj <= 1; ++dj) {
    for (int di = 0; di <= 1; ++di) {
      const int i = std::min(cell->i0 + di, grid.n - 1), j = std::min(cell->j0 + dj, grid.n - 1);
      if (grid.obstacle(i, j)) return kInf;
      const double w = (di ? cell->g1 : 1 - cell->g1) * (dj ? cell->g2 : 1 - cell->g2);
      if (w <= 0) continue;
      const double v = grid.unsafe(i, j) ? slice_value(solution, i, j, b) : solution.w2(i, j);
      if (!is_finite(v)) {
        if (!lenient) return kInf;
        continue;
      }
      sum += w * v;
      weight += w;
    }
  }
  return weight > 0 ? sum / weight : kInf;
}

}  // namespace

double sample_value(const BudgetResetSolution& solution, const Grid2D& grid, Vec2 p, double b) {
  return mixed_sample(solution, grid, p, b, false);
}

PathTrace extract_path(const BudgetResetSolution& solution, const Grid2D& grid, Vec2 start, double b0,
                       const ControlSampling& controls) {
  const CoefficientBounds cb = coefficient_bounds(grid);
  const double budget = solution.axis.max_budget;
  PathTrace out;
  out.step = grid.h / (2.0 * cb.speed_max);
  out.start_value = sample_value(solution, grid, start, b0);
  if (!is_finite(out.start_value)) throw std::invalid_argument("extract_path: start is not feasible");

  double w2max = 0.0;
  for (double w : solution.w2.reshaped()) {
    if (is_finite(w)) w2max = std::max(w2max, w);
  }
  const double t_cap = (budget / cb.rate_min + std::max(w2max, out.start_value) / cb.cost_min) * 1.5;

  const int dirs = std::max(controls.directions, 4);
  Vec2 y = start;
  double b = b0, t = 0.0;
  out.points.push_back({y.x(), y.y(), nearest(grid, y).safe ? budget : b, t});

  constexpr double kGolden = 0.6180339887498949;
  bool descend = false;  // following V toward S
  while (true) {
    const Coefficients c = nearest(grid, y);
    if (c.safe) {
      b = budget;
      descend = false;
    }
    auto finish = [&](const Exit& e) {
      const double d = (e.point - y).norm();
      out.cost += e.value;
      t += d / c.f;
      b -= e.spend;
      y = e.point;
      out.points.push_back({y.x(), y.y(), nearest(grid, y).safe ? budget : b, t});
      out.reached = true;
      return out;
    };
    const auto exit = direct_exit(grid, y, 2.0 * grid.h, c);
    const bool exit_ok = exit && exit->spend <= b + 1e-12;
    if (exit_ok && (exit->point - y).norm() <= 0.5 * grid.h) return finish(*exit);
    if (t > t_cap) throw std::runtime_error("extract_path: time cap reached");

    // In U each step mirrors the solver update: move for db / rate and spend
    // one budget slice, so a finite value always has a finite successor.
    const double db = solution.axis.step;
    const double dt = c.safe ? out.step : db / c.rate;
    const double next_b = c.safe ? budget : b - db;
    double level = next_b;
    bool lenient = false;
    auto objective = [&](double theta) {
      const Vec2 q = y + dt * c.f * Vec2(std::cos(theta), std::sin(theta));
      if (descend) return sample_field(grid, solution.v, q);
      return dt * c.k + mixed_sample(solution, grid, q, level, lenient);
    };
    double best = kInf, best_theta = 0.0;
    auto scan = [&] {
      best = kInf;
      for (int k = 0; k < dirs; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / dirs;
        const double v = objective(theta);
        if (v < best) {
          best = v;
          best_theta = theta;
        }
      }
    };
    if (!descend) {
      scan();
      // A value capped by the slice below is certified one slice further down.
      if (!is_finite(best) && !c.safe) {
        level -= db;
        scan();
      }
      // Off the grid the successor cell can straddle the edge of the finite
      // region, so allow one cell of slack before giving up on W.
      if (!is_finite(best) && !c.safe) {
        level = next_b;
        lenient = true;
        scan();
      }
      // Values seeded at the minimal feasible level are certified by the
      // minimal-budget route to S, so follow V down until the next reset.
      if (!is_finite(best) && !c.safe) {
        descend = true;
        level = next_b;
      }
    }
    if (descend) scan();
    if (exit_ok && (descend || exit->value <= best)) return finish(*exit);
    if (!is_finite(best)) return out;

    if (controls.refine) {
      const double half_width = 2.0 * std::numbers::pi / dirs;
      double lo = best_theta - half_width, hi = best_theta + half_width;
      double a = hi - kGolden * (hi - lo), bb = lo + kGolden * (hi - lo);
      double fa = objective(a), fb = objective(bb);
      for (int it = 0; it < 30; ++it) {
        if (fa < fb) {
          hi = bb;
          bb = a;
          fb = fa;
          a = hi - kGolden * (hi - lo);
          fa = objective(a);
        } else {
          lo = a;
          a = bb;
          fa = fb;
          bb = lo + kGolden * (hi - lo);
          fb = objective(bb);
        }
      }
      const double theta = fa < fb ? a : bb;
      if (std::min(fa, fb) < best) best_theta = theta;
    }

    y += dt * c.f * Vec2(std::cos(best_theta), std::sin(best_theta));
    b = c.safe ? budget : std::max(level, 0.0);
    t += dt;
    out.cost += dt * c.k;
    out.points.push_back({y.x(), y.y(), nearest(grid, y).safe ? budget : b, t});
  }
}

void write_path_csv(std::ostream& out, const PathTrace& path) {
  out << "x,y,b,t\n";
  for (const PathPoint& p : path.points) out << p.x << ',' << p.y << ',' << p.b << ',' << p.t << '\n';
}

ReplayReport replay_path(const ScenarioConfig& config, const std::vector<PathPoint>& points,
                         double slack) {
  ReplayReport r;
  const double h = 2.0 / (config.grid_size - 1);
  auto shadowed = [&](Vec2 q) {
    for (const Region& o : config.obstacles) {
      if (o.blocks(*config.observer, q)) return true;
    }
    return false;
  };
  auto is_safe = [&](Vec2 q) {
    if (std::max(std::abs(q.x()), std::abs(q.y())) >= 1.0 - 1e-12) return true;
    for (const Region& s : config.safe) {
      if (s.contains(q, h)) return true;
    }
    if (config.observer) {
      const Vec2 offsets[5] = {Vec2(0, 0), Vec2(h, 0), Vec2(-h, 0), Vec2(0, h), Vec2(0, -h)};
      for (const Vec2& o : offsets) {
        if (shadowed(q + o)) return true;
      }
    }
    return false;
  };
  bool in_safe = points.empty() || is_safe({points[0].x, points[0].y});
  double spent = in_safe ? 0.0 : std::max(0.0, config.budget - points[0].b);
  for (std::size_t p = 1; p < points.size(); ++p) {
    const Vec2 a(points[p - 1].x, points[p - 1].y), b(points[p].x, points[p].y);
    const double len = (b - a).norm();
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / (0.25 * h))));
    for (int k = 0; k < pieces; ++k) {
      const Vec2 q = a + (k + 0.5) / pieces * (b - a);
      for (const Region& o : config.obstacles) {
        if (o.contains(q, -h)) r.hits_obstacle = true;
      }
      const bool safe = is_safe(q);
      const double f = speed_at(config.speed, q, safe);
      const double dt = len / pieces / f;
      r.length += len / pieces;
      r.time += dt;
      if (safe) {
        if (!in_safe) ++r.resets;
        spent = 0.0;
      } else {
        spent += dt * config.resource_rate;
        r.max_spent = std::max(r.max_spent, spent);
      }
      in_safe = safe;
    }
  }
  r.feasible = !r.hits_obstacle && r.max_spent <= config.budget + slack;
  return r;
}

}  // namespace budgetpath
