#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "budgetpath/common.hpp"

namespace budgetpath {

template <typename Scalar>
using FieldT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// N x N values indexed (i, j) with x = -1 + i*h and y = -1 + j*h.
using ScalarField = FieldT<double>;

using Vec2 = Eigen::Vector2d;

enum class PointClass : std::uint8_t { kSafe, kUnsafe, kObstacle, kDomainBoundary };

/// Uniform grid on [-1,1]^2 with per-point classification and coefficients.
/// Linear point ids follow Eigen's column-major storage: id = i + j*n.
struct Grid2D {
  int n = 0;
  double h = 0.0;
  std::vector<PointClass> cls;
  ScalarField speed;          // f
  ScalarField resource_rate;  // K-hat, budget spent per unit time in U
  ScalarField running_cost;   // K
  ScalarField exit_cost;      // q, +inf where exit is forbidden

  /// Interior points unsafe, boundary points on the safe side, unit coefficients.
  static Grid2D uniform(int n);

  double x(int i) const { return -1.0 + i * h; }
  Vec2 point(int i, int j) const { return {x(i), x(j)}; }
  int id(int i, int j) const { return i + j * n; }
  int points() const { return n * n; }

  PointClass at(int i, int j) const { return cls[id(i, j)]; }
  PointClass& at(int i, int j) { return cls[id(i, j)]; }

  bool safe_side(int i, int j) const {
    const PointClass c = at(i, j);
    return c == PointClass::kSafe || c == PointClass::kDomainBoundary;
  }
  bool unsafe(int i, int j) const { return at(i, j) == PointClass::kUnsafe; }
  bool obstacle(int i, int j) const { return at(i, j) == PointClass::kObstacle; }
  bool on_edge(int i, int j) const { return i == 0 || j == 0 || i == n - 1 || j == n - 1; }
  /// Points whose value is prescribed by q: domain boundary and exit points.
  bool fixed(int i, int j) const {
    return at(i, j) == PointClass::kDomainBoundary || is_finite(exit_cost(i, j));
  }
  /// Unsafe points with a safe-side 4-neighbour.
  bool gamma_adjacent(int i, int j) const;

  int count(PointClass c) const;
};

/// Coefficient bounds over the relevant point sets.
struct CoefficientBounds {
  double speed_min, speed_max;       // F1, F2 over non-obstacle points
  double rate_min, rate_max;         // K-hat_1, K-hat_2 over unsafe points
  double cost_min, cost_max;         // K1, K2 over non-obstacle points
};
CoefficientBounds coefficient_bounds(const Grid2D& grid);

/// Throws when coefficients are nonpositive where they are used.
void validate_grid(const Grid2D& grid);

struct BudgetAxis {
  double max_budget = 0.0;
  double step = 0.0;
  int levels = 0;

  double level(int j) const { return j * step; }

  /// Step B / round(B / (0.8 h)), so that B is an exact multiple.
  static BudgetAxis from_spacing(double max_budget, double h);
  /// Explicit step; B must be an integer multiple up to 1e-9 relative.
  static BudgetAxis with_step(double max_budget, double step);
};

/// W1 slices, one N x N field per budget level.
struct BudgetField {
  std::vector<ScalarField> slices;
  int levels() const { return static_cast<int>(slices.size()); }
};

/// Containing cell of a point: lower-left corner and local weights in [0,1].
struct CellSample {
  int i0, j0;
  double g1, g2;
};

/// Nullopt when the point lies outside the grid hull (beyond 1e-12 h).
std::optional<CellSample> locate(int n, double h, double x, double y);

/// Bilinear combination of the four corner values returned by `corner(i, j)`.
/// Corners with zero weight are skipped so an infinite value there is ignored;
/// any infinite corner with positive weight gives +inf.
template <typename Scalar, class Corner>
Scalar bilinear(const CellSample& c, Corner&& corner) {
  const Scalar w1 = (1 - c.g1) * (1 - c.g2);
  const Scalar w2 = c.g1 * (1 - c.g2);
  const Scalar w3 = c.g1 * c.g2;
  const Scalar w4 = (1 - c.g1) * c.g2;
  Scalar sum = 0;
  if (w1 > 0) sum += w1 * corner(c.i0, c.j0);
  if (w2 > 0) sum += w2 * corner(c.i0 + 1, c.j0);
  if (w3 > 0) sum += w3 * corner(c.i0 + 1, c.j0 + 1);
  if (w4 > 0) sum += w4 * corner(c.i0, c.j0 + 1);
  return sum;
}

/// Samples a field at (x, y); nullopt outside the hull.
template <typename Scalar>
std::optional<Scalar> bilinear_sample(const FieldT<Scalar>& field, double h, Vec2 p) {
  const auto cell = locate(static_cast<int>(field.rows()), h, p.x(), p.y());
  if (!cell) return std::nullopt;
  return bilinear<Scalar>(*cell, [&](int i, int j) { return field(i, j); });
}

}  // namespace budgetpath
