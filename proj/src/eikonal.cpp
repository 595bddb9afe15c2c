#include "budgetpath/eikonal.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace budgetpath {

namespace {

// Result of a local update. The auxiliary field follows the same step:
// aux = length / f * K_aux + (1 - wb) aux_a + wb aux_b.
struct Stencil {
  double value = kInf;
  int a = -1;
  int b = -1;  // -1 for a one-sided update
  double wb = 0.0;
  double length = 0.0;
};

// Replaces `best` by `s` when it is smaller, or equal with a smaller aux.
void keep_better(Stencil& best, const Stencil& s, const ScalarField* tie) {
  if (s.value > best.value) return;
  if (s.value == best.value && best.a >= 0) {
    if (!tie) return;
    auto aux = [&](const Stencil& t) {
      const double va = tie->data()[t.a];
      return t.b < 0 ? va : (1 - t.wb) * va + t.wb * tie->data()[t.b];
    };
    if (aux(s) >= aux(best)) return;
  }
  best = s;
}

// Four-neighbour upwind update. Between the two neighbours along an axis the
// smaller value wins; equal values go to the smaller `tie` value.
template <class Usable>
Stencil four_point(int n, double h, double rhs, const ScalarField& u, const ScalarField* tie, int i, int j,
                   Usable usable) {
  auto pick = [&](int p, int q) {
    const bool up = p >= 0 && usable(p), uq = q >= 0 && usable(q);
    if (!up) return uq ? q : -1;
    if (!uq) return p;
    const double vp = u.data()[p], vq = u.data()[q];
    if (vp != vq) return vp < vq ? p : q;
    if (tie && tie->data()[q] < tie->data()[p]) return q;
    return p;
  };
  const int id = i + j * n;
  int a = pick(i > 0 ? id - 1 : -1, i + 1 < n ? id + 1 : -1);
  int b = pick(j > 0 ? id - n : -1, j + 1 < n ? id + n : -1);
  double va = a >= 0 ? u.data()[a] : kInf;
  double vb = b >= 0 ? u.data()[b] : kInf;
  if (vb < va || (vb == va && tie && a >= 0 && b >= 0 && tie->data()[b] < tie->data()[a])) {
    std::swap(a, b);
    std::swap(va, vb);
  }
  Stencil s;
  if (!is_finite(va)) return s;
  if (!is_finite(vb) || vb - va >= rhs) {
    s.value = va + rhs;
    s.a = a;
    s.length = h;
    return s;
  }
  const double d = va - vb;
  s.value = 0.5 * (va + vb + std::sqrt(2.0 * rhs * rhs - d * d));
  const double lambda = (s.value - va) / ((s.value - va) + (s.value - vb));
  s.a = a;
  s.b = b;
  s.wb = 1.0 - lambda;
  s.length = h * std::sqrt(lambda * lambda + (1 - lambda) * (1 - lambda));
  return s;
}

// Eight-neighbour semi-Lagrangian update: the foot point moves along the
// segment from an axis neighbour a to the adjacent diagonal neighbour d.
template <class Usable>
Stencil eight_point(int n, double h, double rhs, const ScalarField& u, const ScalarField* tie,
                    const std::vector<char>& walls, int i, int j, Usable usable) {
  static constexpr int kAxis[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int id = i + j * n;
  auto at = [&](int di, int dj) {
    const int ii = i + di, jj = j + dj;
    if (ii < 0 || jj < 0 || ii >= n || jj >= n) return -1;
    const int q = id + di + dj * n;
    return usable(q) ? q : -1;
  };
  auto wall = [&](int di, int dj) { return !walls.empty() && walls[id + di + dj * n] != 0; };
  Stencil best;
  for (int k = 0; k < 4; ++k) {
    const int ax = kAxis[k][0], ay = kAxis[k][1];
    const int a = at(ax, ay);
    if (a >= 0) keep_better(best, {u.data()[a] + rhs, a, -1, 0.0, h}, tie);
    const int dg = at(ax - ay, ay + ax);  // diagonal counter-clockwise of the axis step
    if (dg >= 0 && !(wall(ax, ay) && wall(-ay, ax))) keep_better(best, {u.data()[dg] + rhs * std::sqrt(2.0), dg, -1, 0.0, h * std::sqrt(2.0)}, tie);
    for (int side : {1, -1}) {
      const int d = at(ax - side * ay, ay + side * ax);
      if (a < 0 || d < 0) continue;
      const double ua = u.data()[a], ud = u.data()[d];
      const double delta = ua - ud;
      if (!is_finite(ua) || !is_finite(ud) || delta <= 0.0 || delta >= rhs / std::sqrt(2.0)) continue;
      const double t = delta / std::sqrt(rhs * rhs - delta * delta);
      const double root = std::sqrt(1.0 + t * t);
      keep_better(best, {rhs * root + ua - t * delta, a, d, t, h * root}, tie);
    }
  }
  return best;
}

template <class Usable>
Stencil local_update(const EikonalProblem& p, double rhs, const ScalarField& u, const ScalarField* tie, int i,
                     int j, Usable usable) {
  if (p.stencil == EikonalStencil::kEightPoint) return eight_point(p.n, p.h, rhs, u, tie, p.walls, i, j, usable);
  return four_point(p.n, p.h, rhs, u, tie, i, j, usable);
}

struct MarchOutput {
  ScalarField u;
  ScalarField aux;
};

// Fast marching. With `aux_cost`, a second field is carried along each
// accepted stencil, see Stencil.
MarchOutput march(const EikonalProblem& p, const ScalarField* aux_cost,
                  const std::vector<double>* aux_data) {
  const int n = p.n;
  MarchOutput out{ScalarField::Constant(n, n, kInf), ScalarField()};
  if (aux_cost) out.aux = ScalarField::Constant(n, n, kInf);
  std::vector<char> accepted(static_cast<std::size_t>(n) * n, 0);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t k = 0; k < p.data.size(); ++k) {
    const auto [id, value] = p.data[k];
    if (value < out.u.data()[id]) {
      out.u.data()[id] = value;
      if (aux_cost) out.aux.data()[id] = (*aux_data)[k];
    } else if (value == out.u.data()[id] && aux_cost) {
      out.aux.data()[id] = std::min(out.aux.data()[id], (*aux_data)[k]);
    }
  }
  for (int id = 0; id < n * n; ++id) {
    if (is_finite(out.u.data()[id]) && !p.active[id]) heap.emplace(out.u.data()[id], id);
  }
  auto usable = [&](int q) { return accepted[q] != 0; };
  const ScalarField* tie = aux_cost ? &out.aux : nullptr;

  while (!heap.empty()) {
    const auto [value, id] = heap.top();
    heap.pop();
    if (accepted[id] || value > out.u.data()[id]) continue;
    accepted[id] = 1;
    const int i = id % n, j = id / n;
    if (aux_cost && p.active[id]) {
      const double f = p.speed(i, j);
      const Stencil s = local_update(p, p.h * p.cost(i, j) / f, out.u, tie, i, j, usable);
      double aux = s.length / f * (*aux_cost)(i, j) + (1 - s.wb) * out.aux.data()[s.a];
      if (s.b >= 0) aux += s.wb * out.aux.data()[s.b];
      out.aux.data()[id] = aux;
    }
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if ((di == 0 && dj == 0) || (p.stencil == EikonalStencil::kFourPoint && di != 0 && dj != 0)) continue;
        const int qi = i + di, qj = j + dj;
        if (qi < 0 || qj < 0 || qi >= n || qj >= n) continue;
        const int q = qi + qj * n;
        if (accepted[q] || !p.active[q]) continue;
        const Stencil s =
            local_update(p, p.h * p.cost(qi, qj) / p.speed(qi, qj), out.u, tie, qi, qj, usable);
        if (s.value < out.u.data()[q]) {
          out.u.data()[q] = s.value;
          heap.emplace(s.value, q);
        }
      }
    }
  }
  return out;
}

ScalarField sweep(const EikonalProblem& p) {
  const int n = p.n;
  ScalarField u = ScalarField::Constant(n, n, kInf);
  for (const auto& [id, value] : p.data) u.data()[id] = std::min(u.data()[id], value);
  std::vector<char> present(static_cast<std::size_t>(n) * n, 0);
  for (int id = 0; id < n * n; ++id) present[id] = p.active[id] || is_finite(u.data()[id]);
  auto usable = [&](int q) { return present[q] != 0; };
  for (int pass = 0; pass < 10000; ++pass) {
    double change = 0.0;
    for (int order = 0; order < 4; ++order) {
      const bool rev_i = order & 1, rev_j = order & 2;
      for (int jj = 0; jj < n; ++jj) {
        const int j = rev_j ? n - 1 - jj : jj;
        for (int ii = 0; ii < n; ++ii) {
          const int i = rev_i ? n - 1 - ii : ii;
          const int id = i + j * n;
          if (!p.active[id]) continue;
          const double v =
              local_update(p, p.h * p.cost(i, j) / p.speed(i, j), u, nullptr, i, j, usable).value;
          if (v < u.data()[id]) {
            change = std::max(change, is_finite(u.data()[id]) ? u.data()[id] - v : kInf);
            u.data()[id] = v;
          }
        }
      }
    }
    if (change <= 1e-15) break;
  }
  return u;
}

}  // namespace

EikonalProblem grid_problem(const Grid2D& g, const ScalarField& cost) {
  EikonalProblem p;
  p.n = g.n;
  p.h = g.h;
  p.active.assign(static_cast<std::size_t>(g.points()), 0);
  p.speed = g.speed;
  p.cost = cost;
  p.walls.resize(p.active.size());
  for (int id = 0; id < g.points(); ++id) p.walls[id] = g.cls[id] == PointClass::kObstacle;
  return p;
}

ScalarField solve_eikonal(const EikonalProblem& problem, EikonalMethod method) {
  if (static_cast<int>(problem.active.size()) != problem.n * problem.n) {
    throw std::invalid_argument("active mask has the wrong size");
  }
  if (method == EikonalMethod::kFastSweeping) return sweep(problem);
  return march(problem, nullptr, nullptr).u;
}

ScalarField solve_unconstrained(const Grid2D& g) {
  EikonalProblem p = grid_problem(g, g.running_cost);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.obstacle(i, j)) continue;
      if (g.fixed(i, j)) {
        if (is_finite(g.exit_cost(i, j))) p.data.emplace_back(g.id(i, j), g.exit_cost(i, j));
      } else {
        p.active[g.id(i, j)] = 1;
      }
    }
  }
  return solve_eikonal(p);
}

namespace {

EikonalProblem mfl_problem(const Grid2D& g, const ScalarField& safe_values,
                           std::vector<double>* aux_data) {
  EikonalProblem p = grid_problem(g, g.resource_rate);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.unsafe(i, j)) {
        p.active[g.id(i, j)] = 1;
      } else if (g.safe_side(i, j) && is_finite(safe_values(i, j))) {
        p.data.emplace_back(g.id(i, j), 0.0);
        if (aux_data) aux_data->push_back(safe_values(i, j));
      }
    }
  }
  return p;
}

}  // namespace

MflSolution solve_mfl(const Grid2D& g, const ScalarField& safe_values) {
  std::vector<double> aux_data;
  const EikonalProblem p = mfl_problem(g, safe_values, &aux_data);
  MarchOutput m = march(p, &g.running_cost, &aux_data);
  return {std::move(m.u), std::move(m.aux)};
}

ScalarField solve_mfl_value(const Grid2D& g, const ScalarField& safe_values) {
  return march(mfl_problem(g, safe_values, nullptr), nullptr, nullptr).u;
}

}  // namespace budgetpath
