#include "budgetpath/contour.hpp"

#include <array>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "budgetpath/detail/text.hpp"

namespace budgetpath {

namespace {

struct Segment {
  long a, b;  // edge keys
  Vec2 pa, pb;
};

}  // namespace

std::vector<Polyline> extract_contour(const ScalarField& f, double h, double level) {
  if (!std::isfinite(level)) throw std::invalid_argument("contour level must be finite");
  const int n = static_cast<int>(f.rows());
  auto x = [h](int i) { return -1.0 + i * h; };
  // Horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
  auto hkey = [n](int i, int j) { return 2L * (i + static_cast<long>(j) * n); };
  auto vkey = [n](int i, int j) { return 2L * (i + static_cast<long>(j) * n) + 1; };
  auto cross = [&](int ia, int ja, int ib, int jb) {
    const double va = f(ia, ja), vb = f(ib, jb);
    const double t = (level - va) / (vb - va);
    return Vec2(x(ia) + t * (x(ib) - x(ia)), x(ja) + t * (x(jb) - x(ja)));
  };

  std::vector<Segment> segments;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const std::array<double, 4> v = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
      bool finite = true;
      for (double s : v) finite &= std::isfinite(s);
      if (!finite) continue;
      int mask = 0;
      for (int k = 0; k < 4; ++k) mask |= (v[k] >= level) << k;
      if (mask == 0 || mask == 15) continue;

      // Edges: 0 bottom, 1 right, 2 top, 3 left.
      const long key[4] = {hkey(i, j), vkey(i + 1, j), hkey(i, j + 1), vkey(i, j)};
      auto point = [&](int e) {
        switch (e) {
          case 0: return cross(i, j, i + 1, j);
          case 1: return cross(i + 1, j, i + 1, j + 1);
          case 2: return cross(i, j + 1, i + 1, j + 1);
          default: return cross(i, j, i, j + 1);
        }
      };
      auto add = [&](int e0, int e1) { segments.push_back({key[e0], key[e1], point(e0), point(e1)}); };
      const bool centre_high = (v[0] + v[1] + v[2] + v[3]) / 4 >= level;
      switch (mask) {
        case 1: case 14: add(3, 0); break;
        case 2: case 13: add(0, 1); break;
        case 3: case 12: add(3, 1); break;
        case 4: case 11: add(1, 2); break;
        case 6: case 9: add(0, 2); break;
        case 7: case 8: add(3, 2); break;
        case 5:
          if (centre_high) { add(3, 2); add(0, 1); } else { add(3, 0); add(1, 2); }
          break;
        case 10:
          if (centre_high) { add(3, 0); add(1, 2); } else { add(3, 2); add(0, 1); }
          break;
      }
    }
  }

  std::unordered_multimap<long, int> by_edge;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    by_edge.emplace(segments[s].a, s);
    by_edge.emplace(segments[s].b, s);
  }
  std::vector<char> used(segments.size(), 0);
  auto other = [&](long edge, int from) {
    auto range = by_edge.equal_range(edge);
    for (auto it = range.first; it != range.second; ++it) {
      if (it->second != from && !used[it->second]) return it->second;
    }
    return -1;
  };
  auto degree = [&](long edge) { return by_edge.count(edge); };

  std::vector<Polyline> lines;
  auto trace = [&](int start, long start_edge) {
    Polyline line;
    int s = start;
    long edge = start_edge;
    const Segment& first = segments[s];
    line.points.push_back(first.a == edge ? first.pa : first.pb);
    while (s >= 0) {
      used[s] = 1;
      const Segment& seg = segments[s];
      const bool forward = seg.a == edge;
      line.points.push_back(forward ? seg.pb : seg.pa);
      edge = forward ? seg.b : seg.a;
      s = other(edge, s);
    }
    line.closed = edge == start_edge && line.points.size() > 2;
    if (line.closed) line.points.back() = line.points.front();
    lines.push_back(std::move(line));
  };
  // Open chains start at edges touched by a single segment.
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (used[s]) continue;
    if (degree(segments[s].a) == 1) trace(s, segments[s].a);
    else if (degree(segments[s].b) == 1) trace(s, segments[s].b);
  }
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (!used[s]) trace(s, segments[s].a);
  }
  return lines;
}

double polyline_length(const Polyline& line) {
  double total = 0.0;
  for (std::size_t k = 1; k < line.points.size(); ++k) total += (line.points[k] - line.points[k - 1]).norm();
  return total;
}

void write_contour_csv(std::ostream& out, const std::vector<Polyline>& lines) {
  out << "polyline_id,x,y\n";
  for (std::size_t id = 0; id < lines.size(); ++id) {
    for (const Vec2& p : lines[id].points) {
      out << id << ',' << detail::format_number(p.x()) << ',' << detail::format_number(p.y()) << '\n';
    }
  }
}

}  // namespace budgetpath
