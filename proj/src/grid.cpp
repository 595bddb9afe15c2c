#include "budgetpath/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace budgetpath {

Grid2D Grid2D::uniform(int n) {
  if (n < 3) throw std::invalid_argument("grid needs at least 3 points per side");
  Grid2D g;
  g.n = n;
  g.h = 2.0 / (n - 1);
  g.cls.assign(static_cast<std::size_t>(n) * n, PointClass::kUnsafe);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (g.on_edge(i, j)) g.at(i, j) = PointClass::kDomainBoundary;
    }
  }
  g.speed = ScalarField::Ones(n, n);
  g.resource_rate = ScalarField::Ones(n, n);
  g.running_cost = ScalarField::Ones(n, n);
  g.exit_cost = ScalarField::Constant(n, n, kInf);
  return g;
}

bool Grid2D::gamma_adjacent(int i, int j) const {
  if (!unsafe(i, j)) return false;
  return (i > 0 && safe_side(i - 1, j)) || (i + 1 < n && safe_side(i + 1, j)) ||
         (j > 0 && safe_side(i, j - 1)) || (j + 1 < n && safe_side(i, j + 1));
}

int Grid2D::count(PointClass c) const {
  return static_cast<int>(std::count(cls.begin(), cls.end(), c));
}

CoefficientBounds coefficient_bounds(const Grid2D& g) {
  CoefficientBounds b{kInf, 0.0, kInf, 0.0, kInf, 0.0};
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.obstacle(i, j)) continue;
      b.speed_min = std::min(b.speed_min, g.speed(i, j));
      b.speed_max = std::max(b.speed_max, g.speed(i, j));
      b.cost_min = std::min(b.cost_min, g.running_cost(i, j));
      b.cost_max = std::max(b.cost_max, g.running_cost(i, j));
      if (g.unsafe(i, j)) {
        b.rate_min = std::min(b.rate_min, g.resource_rate(i, j));
        b.rate_max = std::max(b.rate_max, g.resource_rate(i, j));
      }
    }
  }
  return b;
}

void validate_grid(const Grid2D& g) {
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.obstacle(i, j)) continue;
      const std::string where = " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!(g.speed(i, j) > 0.0)) throw std::invalid_argument("nonpositive speed" + where);
      if (!(g.running_cost(i, j) > 0.0)) throw std::invalid_argument("nonpositive cost" + where);
      if (g.unsafe(i, j) && !(g.resource_rate(i, j) > 0.0)) {
        throw std::invalid_argument("nonpositive resource rate" + where);
      }
      if (g.on_edge(i, j) && !g.safe_side(i, j)) {
        throw std::invalid_argument("domain boundary must be safe" + where);
      }
    }
  }
}

BudgetAxis BudgetAxis::from_spacing(double max_budget, double h) {
  if (!(max_budget > 0.0) || !(h > 0.0)) throw std::invalid_argument("budget and h must be positive");
  const double intervals = std::max(1.0, std::round(max_budget / (0.8 * h)));
  const int k = static_cast<int>(intervals);
  return {max_budget, max_budget / k, k + 1};
}

BudgetAxis BudgetAxis::with_step(double max_budget, double step) {
  if (!(max_budget > 0.0) || !(step > 0.0)) throw std::invalid_argument("budget and step must be positive");
  const double ratio = max_budget / step;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, k)) {
    throw std::invalid_argument("budget step must divide the maximum budget");
  }
  return {max_budget, max_budget / k, static_cast<int>(k) + 1};
}

std::optional<CellSample> locate(int n, double h, double x, double y) {
  auto axis = [&](double v, int& i0, double& g) {
    double u = (v + 1.0) / h;
    const double last = n - 1;
    if (u < -1e-12 || u > last + 1e-12) return false;
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9) u = r;
    u = std::clamp(u, 0.0, last);
    i0 = std::min(static_cast<int>(u), n - 2);
    g = u - i0;
    return true;
  };
  CellSample c{};
  if (!axis(x, c.i0, c.g1) || !axis(y, c.j0, c.g2)) return std::nullopt;
  return c;
}

}  // namespace budgetpath
