#include "budgetpath/oracle.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace budgetpath {

namespace {

constexpr double kInterface = 1.0 / 3.0;
const double kEnd = std::sqrt(5.0) / 3.0;  // L = {x = 1/3, |y| <= kEnd}
const Vec2 kTarget(1.0, 0.0);

// Minimizes a convex function on [lo, hi] by golden-section search.
template <class F>
double golden_min(F f, double lo, double hi) {
  constexpr double g = 0.6180339887498949;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  while (hi - lo > 1e-12) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return std::min({f(lo), f(hi), fa, fb});
}

}  // namespace

double exact_solution_oracle(double x, double y, double b) {
  const Vec2 p(x, y);
  const bool boundary = std::abs(x) >= 1.0 || std::abs(y) >= 1.0;
  if (boundary) return p == kTarget ? 0.0 : kInf;
  const double direct = (p - kTarget).norm();
  if (x <= kInterface) {
    const double crossing = y * (1.0 - kInterface) / (1.0 - x);
    if (std::abs(crossing) <= kEnd) return direct;
    const Vec2 end(kInterface, y >= 0 ? kEnd : -kEnd);
    return (p - end).norm() + 1.0;
  }
  double best = direct <= b ? direct : kInf;
  const double dx = x - kInterface;
  if (dx > b) return best;
  // Points of the line x = 1/3 within budget: |y' - y| <= r.
  const double r = std::sqrt(std::max(0.0, b * b - dx * dx));
  const double lo = std::max(y - r, -kEnd), hi = std::min(y + r, kEnd);
  if (lo <= hi) {
    auto cost = [&](double t) {
      const Vec2 q(kInterface, t);
      return (p - q).norm() + (q - kTarget).norm();
    };
    best = std::min(best, golden_min(cost, lo, hi));
  }
  for (double end : {kEnd, -kEnd}) {
    const Vec2 z(kInterface, std::clamp(end, y - r, y + r));
    best = std::min(best, (p - z).norm() + std::abs(z.y() - end) + 1.0);
  }
  return best;
}

double distance_to_discontinuity(double x, double y, double b) {
  if (b <= 0.0) return kInf;
  // Arc p(phi) = T + b (-cos phi, -sin phi), |phi| <= pi/2, restricted to x > 1/3.
  const double phi0 = std::acos(std::min(1.0, (1.0 - kInterface) / b));
  const double dx = x - kTarget.x(), dy = y - kTarget.y();
  const double r = std::hypot(dx, dy);
  if (r > 0.0) {
    const double phi = std::atan2(-dy, -dx);
    if (std::abs(phi) >= phi0 && std::abs(phi) <= std::numbers::pi / 2) return std::abs(r - b);
  }
  double d = kInf;
  for (double s : {1.0, -1.0}) {
    const Vec2 end = kTarget + b * Vec2(-std::cos(phi0), -s * std::sin(phi0));
    d = std::min(d, (Vec2(x, y) - end).norm());
  }
  return d;
}

ScenarioConfig convergence_scenario(int n) {
  ScenarioConfig c;
  c.name = "convergence";
  c.note = "S = {x <= 1/3} plus the boundary, T = (1,0), B = 1, budget step h";
  c.grid_size = n;
  c.budget = 1.0;
  c.budget_step = 2.0 / (n - 1);
  c.safe.push_back(Region::half_plane(1.0, 0.0, kInterface));
  c.target.kind = TargetSpec::Kind::kPoint;
  c.target.point = kTarget;
  c.starts = {Vec2(0.8, 0.5), Vec2(0.6, -0.7), Vec2(-0.5, 0.9)};
  return c;
}

ErrorReport convergence_errors(const Grid2D& g, const BudgetAxis& axis, const BudgetField& w1,
                               const ScalarField& w2) {
  ErrorReport rep;
  rep.n = g.n;
  double sum = 0.0;
  for (int s = 1; s < axis.levels; ++s) {
    const double b = axis.level(s);
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        if (g.obstacle(i, j)) continue;
        const double num = g.unsafe(i, j) ? w1.slices[s](i, j) : w2(i, j);
        const double ex = exact_solution_oracle(g.x(i), g.x(j), b);
        if (is_finite(num) != is_finite(ex)) {
          ++rep.mismatched;
          continue;
        }
        if (!is_finite(num)) continue;
        ++rep.compared;
        const double e = std::abs(num - ex);
        sum += e;
        const double d = g.unsafe(i, j) ? distance_to_discontinuity(g.x(i), g.x(j), b) : kInf;
        if (d > 3 * g.h) rep.linf_3h = std::max(rep.linf_3h, e);
        if (d > 0.1) rep.linf_01 = std::max(rep.linf_01, e);
      }
    }
  }
  rep.l1 = sum * g.h * g.h * axis.step;
  return rep;
}

std::vector<ErrorReport> run_convergence_test(const std::vector<int>& sizes, const SolveOptions& options) {
  std::vector<ErrorReport> out;
  for (int n : sizes) {
    const auto start = std::chrono::steady_clock::now();
    const RasterizedScenario rs = rasterize_scenario(convergence_scenario(n));
    const BudgetResetSolution sol = solve_budget_reset(rs.grid, rs.axis, options);
    ErrorReport rep = convergence_errors(rs.grid, rs.axis, sol.w1, sol.w2);
    rep.iterations = static_cast<int>(sol.log.size());
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(rep);
  }
  return out;
}

}  // namespace budgetpath
