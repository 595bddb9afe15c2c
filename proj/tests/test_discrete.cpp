#include <doctest.h>

#include <random>

#include "budgetpath/discrete_budget.hpp"
#include "fixtures.hpp"

using namespace budgetpath;

namespace {

constexpr double inf = kInf;

// Table from Dijkstra over the expanded graph, used as the reference solver.
ExpandedValueTable expanded_reference(const DirectedGraph& g, int B, ResetMode mode) {
  const ExpandedGraph e = build_expanded_graph(g, {B}, mode);
  const Eigen::VectorXd d = expanded_dijkstra(e);
  Eigen::MatrixXd W(g.size(), B + 1);
  for (int i = 0; i < g.size(); ++i) {
    for (int b = 0; b <= B; ++b) W(i, b) = e.id(i, b) < 0 ? inf : d[e.id(i, b)];
  }
  return {W};
}

void check_row(const ExpandedValueTable& t, int b, std::initializer_list<std::pair<int, double>> v) {
  for (const auto& [node, value] : v) {
    INFO("x" << node << " level " << b);
    CHECK(t(node - 1, b) == value);
  }
}

}  // namespace

TEST_CASE("no-reset values on the example graph") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const NoResetSolution s = solve_no_reset(g, {3});
  CHECK(s.causality == SliceCausality::kSemiImplicit);
  const auto& t = s.table;
  check_row(t, 3, {{1, 9}, {2, 8}, {3, 7}, {4, 6}, {5, 4}, {6, 3}, {7, 2}, {8, 1}});
  check_row(t, 2, {{1, 10}, {2, 11}, {3, inf}, {4, inf}, {5, 5}, {6, 3}, {7, 2}, {8, 1}});
  check_row(t, 1, {{1, inf}, {7, 2}});
  for (int i = 0; i < 8; ++i) {
    if (!g.is_safe(i)) CHECK(t(i, 0) == inf);
  }
  for (int b = 0; b <= 3; ++b) CHECK(t(8, b) == 0.0);
  CHECK(t.values == expanded_reference(g, 3, ResetMode::kNoReset).values);
}

TEST_CASE("large budget recovers the unconstrained cost") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const auto t = solve_no_reset(g, {5}).table;
  const Eigen::VectorXd u = dijkstra(g);
  for (int i = 0; i < 9; ++i) CHECK(t(i, 5) == u[i]);
  CHECK(t.values == expanded_reference(g, 5, ResetMode::kNoReset).values);
}

TEST_CASE("strictly positive secondary costs use a single sweep") {
  std::mt19937_64 rng(3);
  auto g = fixtures::random_graph(rng, 20, 4, ResetMode::kGeneral);
  for (int i = 0; i < g.size(); ++i) {
    for (Arc& a : g.arcs(i)) a.resource = std::max(a.resource, 1);
  }
  const NoResetSolution s = solve_no_reset(g, {4});
  CHECK(s.causality == SliceCausality::kExplicit);
  CHECK(s.table.values == expanded_reference(g, 4, ResetMode::kGeneral).values);
}

TEST_CASE("no-reset solver rejects negative secondary costs") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  CHECK_THROWS_AS(solve_no_reset(g, {3}), std::invalid_argument);
}

TEST_CASE("reset values on the example graph") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  const auto t = solve_reset_dijkstra(g, {3});
  check_row(t, 3, {{1, 9}, {2, 8}, {3, 7}, {4, 5}, {5, 4}, {6, 3}, {7, 2}, {8, 1}});
  check_row(t, 2, {{3, 7}, {4, 10}, {5, 4}, {6, 3}, {8, 1}});
  check_row(t, 1, {{3, 9}, {4, inf}, {5, inf}, {6, 3}, {8, 1}});
  CHECK(t(8, 3) == 0.0);
  CHECK(monotonicity_violation(t) == 0.0);
}

TEST_CASE("a larger budget changes a lower slice") {
  const auto g3 = fixtures::example_graph(ResetMode::kReset, 3);
  const auto g4 = fixtures::example_graph(ResetMode::kReset, 4);
  CHECK(solve_reset_dijkstra(g3, {3})(3, 2) == 10.0);
  CHECK(solve_reset_dijkstra(g4, {4})(3, 2) == 9.0);
}

TEST_CASE("all-safe graph reduces to the unconstrained problem") {
  std::mt19937_64 rng(5);
  auto g = fixtures::random_graph(rng, 15, 3, ResetMode::kReset);
  for (int i = 0; i < 15; ++i) g.set_safe(i, true);
  g = with_safe_costs(g, ResetMode::kReset, 3);
  const auto t = solve_reset_dijkstra(g, {3});
  const Eigen::VectorXd u = dijkstra(g);
  for (int i = 0; i < g.size(); ++i) CHECK(t(i, 3) == u[i]);
  const auto it = solve_reset_iterative(g, {3});
  CHECK(it.iterations == 1);
  CHECK(it.table.values == t.values);
}

TEST_CASE("auxiliary values without resets") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const auto aux = compute_auxiliaries(g);
  const double U[] = {8, 7, 6, 5, 4, 3, 2, 1};
  const double V[] = {2, 2, 3, 3, 2, 2, 1, 1};
  const double Vt[] = {5, 5, 5, 4, 3, 2, 1, 1};
  const double Ut[] = {10, 11, 7, 6, 5, 3, 2, 1};
  for (int i = 0; i < 8; ++i) {
    INFO("x" << i + 1);
    CHECK(aux.u[i] == U[i]);
    CHECK(aux.v[i] == V[i]);
    CHECK(aux.v_tilde[i] == Vt[i]);
    CHECK(aux.u_tilde[i] == Ut[i]);
  }
}

TEST_CASE("auxiliary values with resets") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  const auto final_table = solve_reset_dijkstra(g, {3});
  const Eigen::VectorXd safe = final_table.values.col(3);
  const auto aux = compute_auxiliaries(g, safe);
  const int unsafe[] = {3, 4, 5, 6, 8};
  const double V[] = {1, 2, 2, 1, 1};
  const double Vt[] = {4, 3, 2, 1, 1};
  const double Ut[] = {9, 10, 4, 3, 1};
  for (int k = 0; k < 5; ++k) {
    const int i = unsafe[k] - 1;
    INFO("x" << unsafe[k]);
    CHECK(aux.v[i] == V[k]);
    CHECK(aux.v_tilde[i] == Vt[k]);
    CHECK(aux.u_tilde[i] == Ut[k]);
  }
}

TEST_CASE("coinciding optimal paths give equal auxiliaries") {
  DirectedGraph g(4, 3);
  g.add_arc(0, 1, 2.0, 1);
  g.add_arc(1, 2, 2.0, 1);
  g.add_arc(2, 3, 2.0, 1);
  g.add_arc(0, 2, 5.0, 3);
  const auto aux = compute_auxiliaries(g);
  for (int i = 0; i < 4; ++i) {
    CHECK(aux.u_tilde[i] == aux.u[i]);
    CHECK(aux.v_tilde[i] == aux.v[i]);
  }
}

TEST_CASE("no-reset identities at the minimal feasible level") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int B = 1 + static_cast<int>(rng() % 8);
    const auto g = fixtures::random_graph(rng, 30, B, ResetMode::kNoReset);
    const auto aux = compute_auxiliaries(g);
    const auto t = solve_no_reset(g, {B}).table;
    for (int i = 0; i < g.size(); ++i) {
      if (aux.v[i] <= B) CHECK(t(i, static_cast<int>(aux.v[i])) == aux.u_tilde[i]);
      for (int b = 0; b <= B; ++b) {
        if (b >= aux.v_tilde[i]) CHECK(t(i, b) == aux.u[i]);
      }
      CHECK(aux.u_tilde[i] >= aux.u[i]);
      CHECK(aux.v_tilde[i] >= aux.v[i]);
    }
  }
}

TEST_CASE("iterative reset solver follows the expected sequence") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  const auto s = solve_reset_iterative(g, {3});
  REQUIRE(s.iterations == 3);
  const auto& first = s.table_history[0];
  CHECK(first(6, 3) == 2.0);
  CHECK(first(0, 3) == inf);
  CHECK(first(3, 3) == 6.0);
  CHECK(first(4, 3) == 5.0);
  CHECK(first(4, 2) == 5.0);
  CHECK(first(7, 1) == 1.0);
  const auto& second = s.table_history[1];
  CHECK(second(0, 3) == 9.0);
  CHECK(second(1, 3) == 8.0);
  CHECK(second(2, 3) == 7.0);
  CHECK(second(3, 3) == 5.0);
  CHECK(second(3, 2) == inf);
  CHECK(second(2, 1) == inf);
  CHECK(second(5, 1) == 3.0);
  CHECK(s.table.values == solve_reset_dijkstra(g, {3}).values);
}

TEST_CASE("iterative reset solver agrees with expanded dijkstra") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int B = 1 + static_cast<int>(rng() % 8);
    const int m = 5 + static_cast<int>(rng() % 46);
    const auto g = fixtures::random_graph(rng, m, B, ResetMode::kReset);
    const auto direct = solve_reset_dijkstra(g, {B});
    const auto iterative = solve_reset_iterative(g, {B});
    CHECK(iterative.table.values == direct.values);
    CHECK(monotonicity_violation(direct) == 0.0);

    DirectedGraph plain = with_safe_costs(g, ResetMode::kNoReset, B);
    const auto no_reset = solve_no_reset(plain, {B}).table;
    CHECK((direct.values.array() <= no_reset.values.array()).all());
  }
}
