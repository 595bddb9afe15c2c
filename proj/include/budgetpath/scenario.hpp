#pragma once

#include <optional>
#include <string>
#include <vector>

#include "budgetpath/grid.hpp"

namespace budgetpath {

/// Closed geometric primitive. Rect: [x0,x1] x [y0,y1]. Circle: centre and
/// radius. Half-plane: points with nx*x + ny*y <= c.
struct Region {
  enum class Kind { kRect, kCircle, kHalfPlane };
  Kind kind = Kind::kRect;
  double p[4] = {0, 0, 0, 0};

  static Region rect(double x0, double y0, double x1, double y1);
  static Region circle(double cx, double cy, double r);
  static Region half_plane(double nx, double ny, double c);

  /// Membership with an absolute slack `eps` on the boundary.
  bool contains(Vec2 q, double eps = 1e-12) const;
  /// True when the open segment a -> b meets the region.
  bool blocks(Vec2 a, Vec2 b) const;
};

struct SpeedRegion {
  Region region;
  double value;
};

/// Speed evaluation order: base value or formula, then the safe-set value if
/// given, then region overrides with the last match winning.
struct SpeedSpec {
  double base = 1.0;
  std::string formula;  // "" or "sinusoid": 1 - 0.5 sin(5 pi x) sin(5 pi y)
  std::optional<double> safe;
  std::vector<SpeedRegion> regions;
};

/// Speed at a point; `safe` selects the safe-set value when one is given.
double speed_at(const SpeedSpec& spec, Vec2 q, bool safe);

struct TargetSpec {
  enum class Kind { kPoint, kRegion, kBoundary };
  Kind kind = Kind::kPoint;
  Vec2 point = Vec2::Zero();
  Region region;  // kRegion: gridpoints inside; kBoundary: optional restriction
  bool restrict_boundary = false;
};

struct ScenarioConfig {
  std::string name;
  std::string note;
  bool reconstruction = false;  // geometry not taken from printed coordinates
  int grid_size = 101;
  double budget = 1.0;
  std::optional<double> budget_step;  // default: B / round(B / (0.8 h))
  std::vector<Region> safe;           // union; the domain boundary is always safe
  std::vector<Region> obstacles;
  std::optional<Vec2> observer;  // shadows of the obstacles become safe
  SpeedSpec speed;
  double running_cost = 1.0;
  double resource_rate = 1.0;
  TargetSpec target;
  double target_exit_cost = 0.0;
  std::vector<Vec2> starts;
  int controls = 64;
  double tolerance = 1e-8;
  int max_iterations = 100;
};

ScenarioConfig parse_scenario(const std::string& json_text);
std::string dump_scenario(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const std::string& path, const ScenarioConfig& config);

struct RasterizedScenario {
  Grid2D grid;
  BudgetAxis axis;
};

/// Throws std::invalid_argument for an empty target or a target outside the safe set.
RasterizedScenario rasterize_scenario(const ScenarioConfig& config);

/// Safe mask (1 = shadowed) for non-obstacle gridpoints: a point is visible
/// iff the open segment from the observer to it meets no obstacle.
std::vector<char> compute_visibility_mask(const Grid2D& grid, const std::vector<Region>& obstacles,
                                          Vec2 observer);

}  // namespace budgetpath
