#include "budgetpath/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace budgetpath {

using nlohmann::json;

Region Region::rect(double x0, double y0, double x1, double y1) {
  if (!(x0 <= x1 && y0 <= y1)) throw std::invalid_argument("rectangle corners out of order");
  return {Kind::kRect, {x0, y0, x1, y1}};
}

Region Region::circle(double cx, double cy, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("circle radius must be positive");
  return {Kind::kCircle, {cx, cy, r, 0.0}};
}

Region Region::half_plane(double nx, double ny, double c) {
  if (nx == 0.0 && ny == 0.0) throw std::invalid_argument("half-plane normal is zero");
  return {Kind::kHalfPlane, {nx, ny, c, 0.0}};
}

bool Region::contains(Vec2 q, double eps) const {
  switch (kind) {
    case Kind::kRect:
      return q.x() >= p[0] - eps && q.x() <= p[2] + eps && q.y() >= p[1] - eps && q.y() <= p[3] + eps;
    case Kind::kCircle:
      return std::hypot(q.x() - p[0], q.y() - p[1]) <= p[2] + eps;
    case Kind::kHalfPlane:
      return p[0] * q.x() + p[1] * q.y() <= p[2] + eps * std::hypot(p[0], p[1]);
  }
  return false;
}

bool Region::blocks(Vec2 a, Vec2 b) const {
  constexpr double kOpen = 1e-12;
  const Vec2 d = b - a;
  switch (kind) {
    case Kind::kRect: {
      double t0 = 0.0, t1 = 1.0;
      const double ps[4] = {-d.x(), d.x(), -d.y(), d.y()};
      const double qs[4] = {a.x() - p[0], p[2] - a.x(), a.y() - p[1], p[3] - a.y()};
      for (int k = 0; k < 4; ++k) {
        if (ps[k] == 0.0) {
          if (qs[k] < 0.0) return false;
          continue;
        }
        const double r = qs[k] / ps[k];
        if (ps[k] < 0.0) t0 = std::max(t0, r);
        else t1 = std::min(t1, r);
      }
      return t0 <= t1 && t1 > kOpen && t0 < 1.0 - kOpen;
    }
    case Kind::kCircle: {
      const Vec2 c(p[0], p[1]);
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((c - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      return (a + t * d - c).norm() <= p[2];
    }
    case Kind::kHalfPlane:
      return std::min(p[0] * a.x() + p[1] * a.y(), p[0] * b.x() + p[1] * b.y()) < p[2];
  }
  return false;
}

namespace {

json region_to_json(const Region& r) {
  switch (r.kind) {
    case Region::Kind::kRect: return {{"rect", {r.p[0], r.p[1], r.p[2], r.p[3]}}};
    case Region::Kind::kCircle: return {{"circle", {r.p[0], r.p[1], r.p[2]}}};
    case Region::Kind::kHalfPlane: return {{"half_plane", {r.p[0], r.p[1], r.p[2]}}};
  }
  return {};
}

Region region_from_json(const json& j) {
  auto numbers = [&](const char* key, std::size_t count) {
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != count) throw std::invalid_argument(std::string("region '") + key + "' needs " + std::to_string(count) + " numbers");
    return v;
  };
  if (j.contains("rect")) {
    const auto v = numbers("rect", 4);
    return Region::rect(v[0], v[1], v[2], v[3]);
  }
  if (j.contains("circle")) {
    const auto v = numbers("circle", 3);
    return Region::circle(v[0], v[1], v[2]);
  }
  if (j.contains("half_plane")) {
    const auto v = numbers("half_plane", 3);
    return Region::half_plane(v[0], v[1], v[2]);
  }
  throw std::invalid_argument("unknown region: " + j.dump());
}

std::vector<Region> regions_from_json(const json& j, const char* key) {
  std::vector<Region> out;
  if (j.contains(key)) {
    for (const json& r : j.at(key)) out.push_back(region_from_json(r));
  }
  return out;
}

Vec2 vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw std::invalid_argument("expected a point [x, y]");
  return {v[0], v[1]};
}

void check_inside_domain(const Region& r) {
  constexpr double eps = 1e-12;
  bool ok = true;
  if (r.kind == Region::Kind::kRect) {
    ok = r.p[0] >= -1 - eps && r.p[1] >= -1 - eps && r.p[2] <= 1 + eps && r.p[3] <= 1 + eps;
  } else if (r.kind == Region::Kind::kCircle) {
    ok = std::abs(r.p[0]) <= 1 + eps && std::abs(r.p[1]) <= 1 + eps;
  }
  if (!ok) throw std::invalid_argument("region extends outside [-1,1]^2");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  const json j = json::parse(text);
  ScenarioConfig c;
  c.name = j.value("name", "");
  c.note = j.value("note", "");
  c.reconstruction = j.value("reconstruction", false);
  c.grid_size = j.value("grid", c.grid_size);
  c.budget = j.value("budget", c.budget);
  if (j.contains("budget_step") && !j.at("budget_step").is_null()) {
    c.budget_step = j.at("budget_step").get<double>();
  }
  c.safe = regions_from_json(j, "safe");
  c.obstacles = regions_from_json(j, "obstacles");
  for (const Region& r : c.safe) check_inside_domain(r);
  for (const Region& r : c.obstacles) check_inside_domain(r);
  if (j.contains("observer")) c.observer = vec_from_json(j.at("observer"));
  if (j.contains("speed")) {
    const json& s = j.at("speed");
    if (s.is_number()) {
      c.speed.base = s.get<double>();
    } else {
      c.speed.base = s.value("base", 1.0);
      c.speed.formula = s.value("formula", "");
      if (!c.speed.formula.empty() && c.speed.formula != "sinusoid") {
        throw std::invalid_argument("unknown speed formula: " + c.speed.formula);
      }
      if (s.contains("safe")) c.speed.safe = s.at("safe").get<double>();
      if (s.contains("regions")) {
        for (const json& r : s.at("regions")) {
          c.speed.regions.push_back({region_from_json(r.at("region")), r.at("value").get<double>()});
        }
      }
    }
  }
  c.running_cost = j.value("running_cost", 1.0);
  c.resource_rate = j.value("resource_rate", 1.0);
  const json& t = j.at("target");
  if (t.contains("point")) {
    c.target.kind = TargetSpec::Kind::kPoint;
    c.target.point = vec_from_json(t.at("point"));
  } else if (t.contains("boundary")) {
    c.target.kind = TargetSpec::Kind::kBoundary;
    if (t.contains("region")) {
      c.target.region = region_from_json(t.at("region"));
      c.target.restrict_boundary = true;
    }
  } else if (t.contains("region")) {
    c.target.kind = TargetSpec::Kind::kRegion;
    c.target.region = region_from_json(t.at("region"));
  } else {
    throw std::invalid_argument("target needs 'point', 'region' or 'boundary'");
  }
  c.target_exit_cost = j.value("target_exit_cost", 0.0);
  if (j.contains("starts")) {
    for (const json& p : j.at("starts")) c.starts.push_back(vec_from_json(p));
  }
  c.controls = j.value("controls", c.controls);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.max_iterations = j.value("max_iterations", c.max_iterations);
  if (c.grid_size < 3 || !(c.budget > 0.0) || c.controls < 4) {
    throw std::invalid_argument("scenario: grid >= 3, budget > 0 and controls >= 4 required");
  }
  return c;
}

std::string dump_scenario(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  if (!c.note.empty()) j["note"] = c.note;
  j["reconstruction"] = c.reconstruction;
  j["grid"] = c.grid_size;
  j["budget"] = c.budget;
  if (c.budget_step) j["budget_step"] = *c.budget_step;
  j["safe"] = json::array();
  for (const Region& r : c.safe) j["safe"].push_back(region_to_json(r));
  j["obstacles"] = json::array();
  for (const Region& r : c.obstacles) j["obstacles"].push_back(region_to_json(r));
  if (c.observer) j["observer"] = {c.observer->x(), c.observer->y()};
  json s;
  s["base"] = c.speed.base;
  if (!c.speed.formula.empty()) s["formula"] = c.speed.formula;
  if (c.speed.safe) s["safe"] = *c.speed.safe;
  s["regions"] = json::array();
  for (const SpeedRegion& r : c.speed.regions) {
    s["regions"].push_back({{"region", region_to_json(r.region)}, {"value", r.value}});
  }
  j["speed"] = s;
  j["running_cost"] = c.running_cost;
  j["resource_rate"] = c.resource_rate;
  switch (c.target.kind) {
    case TargetSpec::Kind::kPoint: j["target"] = {{"point", {c.target.point.x(), c.target.point.y()}}}; break;
    case TargetSpec::Kind::kRegion: j["target"] = {{"region", region_to_json(c.target.region)}}; break;
    case TargetSpec::Kind::kBoundary:
      j["target"] = {{"boundary", true}};
      if (c.target.restrict_boundary) j["target"]["region"] = region_to_json(c.target.region);
      break;
  }
  j["target_exit_cost"] = c.target_exit_cost;
  j["starts"] = json::array();
  for (const Vec2& p : c.starts) j["starts"].push_back({p.x(), p.y()});
  j["controls"] = c.controls;
  j["tolerance"] = c.tolerance;
  j["max_iterations"] = c.max_iterations;
  return j.dump(2);
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void save_scenario(const std::string& path, const ScenarioConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_scenario(config) << '\n';
}

std::vector<char> compute_visibility_mask(const Grid2D& grid, const std::vector<Region>& obstacles,
                                          Vec2 observer) {
  std::vector<char> shadow(grid.points(), 0);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      if (grid.obstacle(i, j)) continue;
      const Vec2 p = grid.point(i, j);
      for (const Region& r : obstacles) {
        if (r.blocks(observer, p)) {
          shadow[grid.id(i, j)] = 1;
          break;
        }
      }
    }
  }
  return shadow;
}

double speed_at(const SpeedSpec& spec, Vec2 q, bool safe) {
  double f = spec.base;
  if (spec.formula == "sinusoid") {
    f = 1.0 - 0.5 * std::sin(5 * std::numbers::pi * q.x()) * std::sin(5 * std::numbers::pi * q.y());
  }
  if (spec.safe && safe) f = *spec.safe;
  for (const SpeedRegion& r : spec.regions) {
    if (r.region.contains(q, 1e-9)) f = r.value;
  }
  return f;
}

RasterizedScenario rasterize_scenario(const ScenarioConfig& c) {
  Grid2D g = Grid2D::uniform(c.grid_size);
  const double eps = 1e-9;
  auto in_any = [eps](const std::vector<Region>& rs, Vec2 q) {
    return std::any_of(rs.begin(), rs.end(), [&](const Region& r) { return r.contains(q, eps); });
  };
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.on_edge(i, j)) continue;
      const Vec2 q = g.point(i, j);
      if (in_any(c.obstacles, q)) g.at(i, j) = PointClass::kObstacle;
      else if (in_any(c.safe, q)) g.at(i, j) = PointClass::kSafe;
    }
  }
  if (c.observer) {
    for (const Region& r : c.obstacles) {
      if (r.contains(*c.observer)) throw std::invalid_argument("observer inside an obstacle");
    }
    const std::vector<char> shadow = compute_visibility_mask(g, c.obstacles, *c.observer);
    for (int k = 0; k < g.points(); ++k) {
      if (shadow[k] && g.cls[k] == PointClass::kUnsafe) g.cls[k] = PointClass::kSafe;
    }
  }

  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      g.speed(i, j) = speed_at(c.speed, g.point(i, j), g.safe_side(i, j));
    }
  }
  g.running_cost.setConstant(c.running_cost);
  g.resource_rate.setConstant(c.resource_rate);

  std::vector<int> targets;
  switch (c.target.kind) {
    case TargetSpec::Kind::kPoint: {
      const int i = static_cast<int>(std::lround((c.target.point.x() + 1.0) / g.h));
      const int j = static_cast<int>(std::lround((c.target.point.y() + 1.0) / g.h));
      if (i < 0 || j < 0 || i >= g.n || j >= g.n) throw std::invalid_argument("target outside the domain");
      targets.push_back(g.id(i, j));
      break;
    }
    case TargetSpec::Kind::kRegion:
    case TargetSpec::Kind::kBoundary:
      for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
          const bool inside = c.target.region.contains(g.point(i, j), eps);
          const bool take = c.target.kind == TargetSpec::Kind::kRegion
                                ? inside
                                : g.on_edge(i, j) && (!c.target.restrict_boundary || inside);
          if (take && !g.obstacle(i, j)) targets.push_back(g.id(i, j));
        }
      }
      break;
  }
  if (targets.empty()) throw std::invalid_argument("empty target");
  for (int k : targets) {
    if (g.cls[k] != PointClass::kSafe && g.cls[k] != PointClass::kDomainBoundary) {
      throw std::invalid_argument("target outside the safe set");
    }
    g.exit_cost.data()[k] = c.target_exit_cost;
  }
  validate_grid(g);

  const BudgetAxis axis = c.budget_step ? BudgetAxis::with_step(c.budget, *c.budget_step)
                                        : BudgetAxis::from_spacing(c.budget, g.h);
  return {std::move(g), axis};
}

}  // namespace budgetpath
