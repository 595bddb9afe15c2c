#include <doctest.h>

#include <random>
#include <sstream>

#include "budgetpath/discrete_budget.hpp"
#include "budgetpath/ssp.hpp"
#include "fixtures.hpp"

using namespace budgetpath;

namespace {

SSPModel geometric_model(bool with_direct_control) {
  SSPModel m(2, 1, 1.0);
  if (with_direct_control) m.add_control(0, {3.0, 1, {{1, 1.0}}});
  m.add_control(0, {1.0, 1, {{0, 0.5}, {1, 0.5}}});
  return m;
}

// Random model; `resource(safe)` draws the secondary cost of each control.
template <class Resource>
SSPModel random_model(std::mt19937_64& rng, int m, Resource resource) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> node(0, m);
  SSPModel model(m + 1, m, 1.0);
  for (int i = 0; i < m; ++i) model.set_safe(i, unit(rng) < 0.4);
  for (int i = 0; i < m; ++i) {
    const int controls = 1 + static_cast<int>(rng() % 3);
    for (int a = 0; a < controls; ++a) {
      const int succ = 1 + static_cast<int>(rng() % 3);
      std::vector<double> w(succ);
      double total = 0.0;
      for (double& x : w) total += (x = 0.1 + unit(rng));
      Control c{1.0 + 4.0 * unit(rng), resource(model.is_safe(i)), {}};
      double acc = 0.0;
      for (int k = 0; k < succ; ++k) {
        int j = node(rng);
        if (unit(rng) < 0.25) j = m;
        const double p = k + 1 == succ ? 1.0 - acc : w[k] / total;
        acc += p;
        c.transitions.push_back({j, p});
      }
      model.add_control(i, c);
    }
  }
  return model;
}

}  // namespace

TEST_CASE("value iteration on a deterministic model equals dijkstra") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const auto r = value_iteration(ssp_from_graph(g), 1e-12);
  CHECK(r.converged);
  const Eigen::VectorXd u = dijkstra(g);
  for (int i = 0; i < g.size(); ++i) CHECK(r.values[i] == u[i]);
}

TEST_CASE("geometric self-loop closed forms") {
  const auto one = value_iteration(geometric_model(false), 1e-13);
  CHECK(one.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(one.values[0] - 2.0) < 1e-9);

  const auto two = value_iteration(geometric_model(true), 1e-13);
  CHECK(std::abs(two.values[0] - 2.0) < 1e-9);
  CHECK(two.policy[0] == 1);
}

TEST_CASE("greedy policy cost matches value by simulation") {
  std::mt19937_64 rng(99);
  for (bool direct : {false, true}) {
    const SSPModel m = geometric_model(direct);
    const auto r = value_iteration(m, 1e-13);
    const PolicyEstimate e = simulate_policy(m, r.policy, 0, 100'000, rng);
    CHECK(std::abs(e.mean - r.values[0]) <= 3.0 * e.standard_error);
  }
}

TEST_CASE("value iteration residual is eventually monotone") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const SSPModel m = random_model(rng, 25, [](bool) { return 1; });
    const auto r = value_iteration(m, 1e-12);
    REQUIRE(r.converged);
    const auto& h = r.residual_history;
    std::size_t tail = h.size();
    while (tail > 1 && h[tail - 1] <= h[tail - 2] * (1 + 1e-12)) --tail;
    CHECK(tail <= std::max<std::size_t>(h.size() / 2, 10));
  }
}

TEST_CASE("unreachable states are infinite") {
  SSPModel m(3, 2, 1.0);
  m.add_control(0, {1.0, 1, {{0, 1.0}}});
  m.add_control(1, {1.0, 1, {{0, 0.5}, {2, 0.5}}});
  const auto r = value_iteration(m, 1e-12);
  CHECK(r.values[0] == kInf);
  CHECK(r.values[1] == kInf);
  CHECK(r.policy[0] == -1);
}

TEST_CASE("deterministic budget model equals the graph solver") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const auto r = solve_budget_ssp(ssp_from_graph(g), {3}, 1e-12);
  CHECK(r.method == BudgetSSPMethod::kPerSlice);
  CHECK(r.table.values == solve_no_reset(g, {3}).table.values);
}

TEST_CASE("self-loop in the unsafe set is never feasible") {
  SSPModel m(2, 1, 1.0);
  m.add_control(0, {1.0, 1, {{0, 0.5}, {1, 0.5}}});
  const auto r = solve_budget_ssp(m, {10}, 1e-12);
  CHECK(r.method == BudgetSSPMethod::kExplicitSweep);
  for (int b = 0; b <= 10; ++b) CHECK(r.table(0, b) == kInf);
}

TEST_CASE("zero secondary costs leave every slice unconstrained") {
  std::mt19937_64 rng(31);
  const SSPModel m = random_model(rng, 20, [](bool) { return 0; });
  const auto u = value_iteration(m, 1e-13).values;
  const auto r = solve_budget_ssp(m, {4}, 1e-13);
  for (int i = 0; i < m.size(); ++i) {
    for (int b = 0; b <= 4; ++b) {
      if (is_finite(u[i])) {
        CHECK(std::abs(r.table(i, b) - u[i]) < 1e-9);
      } else {
        CHECK(r.table(i, b) == kInf);
      }
    }
  }
}

TEST_CASE("explicit sweep equals full value iteration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const SSPModel m = random_model(rng, 15, [&](bool) { return 1 + static_cast<int>(rng() % 2); });
    const auto sweep = solve_budget_ssp(m, {5}, 1e-13);
    REQUIRE(sweep.method == BudgetSSPMethod::kExplicitSweep);
    const auto full = solve_expanded_ssp(m, {5}, ResetMode::kGeneral, 1e-13);
    for (int i = 0; i < m.size(); ++i) {
      for (int b = 0; b <= 5; ++b) {
        const double x = sweep.table(i, b), y = full(i, b);
        CHECK((x == y || std::abs(x - y) < 1e-9));
      }
    }
    CHECK(monotonicity_violation(sweep.table) == 0.0);
  }
}

TEST_CASE("negative secondary costs fall back to the full expanded model") {
  std::mt19937_64 rng(43);
  const SSPModel m = random_model(rng, 10, [&](bool safe) { return safe ? -2 : 1; });
  const auto r = solve_budget_ssp(m, {2}, 1e-12);
  CHECK(r.method == BudgetSSPMethod::kFullExpanded);
  CHECK(monotonicity_violation(r.table) <= 1e-9);
}

TEST_CASE("deterministic reset model equals reset dijkstra") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  const auto r = solve_reset_ssp(ssp_from_graph(g), {3}, 1e-12);
  CHECK(r.converged);
  CHECK(r.table.values == solve_reset_dijkstra(g, {3}).values);
}

TEST_CASE("all-safe reset model equals the unconstrained value") {
  std::mt19937_64 rng(45);
  SSPModel m = random_model(rng, 12, [](bool) { return -3; });
  SSPModel all_safe(m.size(), m.target(), 1.0);
  for (int i = 0; i < m.size(); ++i) {
    if (i == m.target()) continue;
    all_safe.set_safe(i, true);
    for (const Control& c : m.controls(i)) all_safe.add_control(i, c);
  }
  const auto u = value_iteration(all_safe, 1e-13).values;
  const auto r = solve_reset_ssp(all_safe, {3}, 1e-13);
  CHECK(r.iterations == 1);
  for (int i = 0; i < m.size(); ++i) {
    CHECK((r.table(i, 3) == u[i] || std::abs(r.table(i, 3) - u[i]) < 1e-9));
  }
}

TEST_CASE("reset alternation matches monolithic value iteration") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int B = 1 + static_cast<int>(rng() % 4);
    const SSPModel m = random_model(rng, 12, [&](bool safe) {
      return safe ? -B : 1 + static_cast<int>(rng() % 2);
    });
    const auto alt = solve_reset_ssp(m, {B}, 1e-13);
    REQUIRE(alt.converged);
    const auto mono = solve_expanded_ssp(m, {B}, ResetMode::kReset, 1e-13);
    for (int i = 0; i < m.size(); ++i) {
      for (int b = 1; b <= B; ++b) {
        const double x = alt.table(i, b), y = mono(i, b);
        INFO("trial " << trial << " node " << i << " level " << b);
        CHECK((x == y || std::abs(x - y) < 1e-9));
      }
    }
  }
}

TEST_CASE("model text format") {
  std::istringstream in(
      "# two nodes and a target\n"
      "2 3 1 2\n"
      "1 1 1 -2 2 1\n"
      "2 1 1 1 2 0.5 3 0.5\n"
      "2 2 3 1 3 1\n"
      "safe 1\n");
  const SSPFile f = read_ssp(in);
  CHECK(f.max_budget == 2);
  CHECK(f.model.is_safe(0));
  CHECK(!f.model.is_safe(1));
  CHECK(f.model.controls(1).size() == 2);
  std::istringstream bad("1 2 1 1\n1 1 1 1 2 0.7\n");
  CHECK_THROWS(read_ssp(bad));
}
