#include "budgetpath/eikonal.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace budgetpath {

int minimal_feasible_slice(double v, const BudgetAxis& axis) {
  if (!(v <= axis.max_budget * (1.0 + 1e-12))) return -1;
  const int j = static_cast<int>(std::ceil(v / axis.step - 1e-12));
  return std::min(std::max(j, 0), axis.levels - 1);
}

namespace {

// Foot point of one sampled direction, reusable across budget levels.
struct Foot {
  std::int32_t base;   // i0 + j0*n, or -1 when the direction is excluded
  std::uint8_t unsafe; // bit k set when corner k reads the W1 slice
  double g1, g2;
};

// Classifies the cell of a foot point. Returns false when it leaves the hull
// or touches an obstacle.
bool make_foot(const Grid2D& g, Vec2 q, Foot& out) {
  const auto cell = locate(g.n, g.h, q.x(), q.y());
  if (!cell) return false;
  const int i0 = cell->i0, j0 = cell->j0;
  const int corner[4][2] = {{i0, j0}, {i0 + 1, j0}, {i0 + 1, j0 + 1}, {i0, j0 + 1}};
  std::uint8_t mask = 0;
  for (int k = 0; k < 4; ++k) {
    const PointClass c = g.at(corner[k][0], corner[k][1]);
    if (c == PointClass::kObstacle) return false;
    if (c == PointClass::kUnsafe) mask |= 1u << k;
  }
  out = {static_cast<std::int32_t>(i0 + j0 * g.n), mask, cell->g1, cell->g2};
  return true;
}

// Mixed interpolation: unsafe corners read `slice`, safe corners read `w2`.
double sample(const Foot& f, int n, const ScalarField& slice, const ScalarField& w2) {
  const int ids[4] = {f.base, f.base + 1, f.base + 1 + n, f.base + n};
  const CellSample c{0, 0, f.g1, f.g2};
  int k = 0;
  return bilinear<double>(c, [&](int di, int dj) {
    k = di == 0 ? (dj == 0 ? 0 : 3) : (dj == 0 ? 1 : 2);
    const int id = ids[k];
    return (f.unsafe >> k) & 1u ? slice.data()[id] : w2.data()[id];
  });
}

}  // namespace

BudgetField sweep_budget_slices(const SweepInputs& in) {
  const Grid2D& g = in.grid;
  const int n = g.n;
  const int levels = in.axis.levels;
  const int dirs = in.controls.directions;
  if (dirs < 4) throw std::invalid_argument("need at least 4 control directions");

  BudgetField w1;
  w1.slices.assign(levels, ScalarField::Constant(n, n, kInf));

  std::vector<int> points;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.unsafe(i, j) && minimal_feasible_slice(in.v(i, j), in.axis) >= 0) points.push_back(g.id(i, j));
    }
  }

  std::vector<double> cs(dirs), sn(dirs);
  for (int k = 0; k < dirs; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / dirs;
    cs[k] = std::cos(theta);
    sn[k] = std::sin(theta);
  }
  std::vector<Foot> feet(static_cast<std::size_t>(points.size()) * dirs);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const int i = points[p] % n, j = points[p] / n;
    const double reach = in.axis.step / g.resource_rate(i, j) * g.speed(i, j);
    const Vec2 x = g.point(i, j);
    for (int k = 0; k < dirs; ++k) {
      Foot& f = feet[p * dirs + k];
      if (!make_foot(g, x + reach * Vec2(cs[k], sn[k]), f)) f.base = -1;
    }
  }

  constexpr double kGolden = 0.6180339887498949;
  const double half_width = 2.0 * std::numbers::pi / dirs;
  for (int s = 1; s < levels; ++s) {
    const ScalarField& below = w1.slices[s - 1];
    ScalarField& slice = w1.slices[s];
    for (std::size_t p = 0; p < points.size(); ++p) {
      const int id = points[p];
      const int i = id % n, j = id / n;
      double& out = slice.data()[id];
      const double cap = in.cap ? in.cap->slices[s].data()[id] : kInf;
      const int first = minimal_feasible_slice(in.v.data()[id], in.axis);
      if (s < first) {
        out = cap;
        continue;
      }
      if (s == first) {
        out = std::min(in.u_tilde.data()[id], cap);
        continue;
      }
      if (in.early_exit && below.data()[id] == in.u.data()[id]) {
        out = std::min(in.u.data()[id], cap);
        continue;
      }
      const double tau = in.axis.step / g.resource_rate(i, j);
      const double run = tau * g.running_cost(i, j);
      double best = kInf;
      int best_k = -1;
      const Foot* f = &feet[p * dirs];
      for (int k = 0; k < dirs; ++k) {
        if (f[k].base < 0) continue;
        const double q = run + sample(f[k], n, below, in.w2_prev);
        if (q < best) {
          best = q;
          best_k = k;
        }
      }
      if (in.controls.refine && best_k >= 0) {
        const Vec2 x = g.point(i, j);
        const double reach = tau * g.speed(i, j);
        auto objective = [&](double theta) {
          Foot foot;
          if (!make_foot(g, x + reach * Vec2(std::cos(theta), std::sin(theta)), foot)) return kInf;
          return run + sample(foot, n, below, in.w2_prev);
        };
        const double centre = 2.0 * std::numbers::pi * best_k / dirs;
        double lo = centre - half_width, hi = centre + half_width;
        double a = hi - kGolden * (hi - lo), b = lo + kGolden * (hi - lo);
        double fa = objective(a), fb = objective(b);
        for (int it = 0; it < 20; ++it) {
          if (fa <= fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - kGolden * (hi - lo);
            fa = objective(a);
          } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + kGolden * (hi - lo);
            fb = objective(b);
          }
        }
        best = std::min({best, fa, fb});
      }
      // More budget never hurts: the extra amount can go unused.
      out = std::min(best, cap);
      if (in.budget_monotone) out = std::min(out, below.data()[id]);
    }
  }
  return w1;
}

}  // namespace budgetpath
