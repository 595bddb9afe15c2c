#include <doctest.h>

#include <random>
#include <sstream>

#include "budgetpath/graph.hpp"
#include "fixtures.hpp"

using namespace budgetpath;

TEST_CASE("ominus caps at the maximum budget") {
  CHECK(ominus(5, -3, 6) == 6);
  CHECK(ominus(3, 1, 6) == 2);
  CHECK(ominus(0, 0, 4) == 0);
}

TEST_CASE("ominus folds left along a path") {
  const int B = 5;
  const int costs[] = {2, -4, 1, 3, -1};
  int b = 4;
  int manual = 4;
  for (int c : costs) b = ominus(b, c, B);
  manual = std::min(manual - 2, B);
  manual = std::min(manual + 4, B);
  manual = std::min(manual - 1, B);
  manual = std::min(manual - 3, B);
  manual = std::min(manual + 1, B);
  CHECK(b == manual);
}

TEST_CASE("dijkstra on the example graph") {
  const auto g = fixtures::example_graph(ResetMode::kNoReset);
  const Eigen::VectorXd u = dijkstra(g);
  const double expected[] = {8, 7, 6, 5, 4, 3, 2, 1, 0};
  for (int i = 0; i < 9; ++i) CHECK(u[i] == expected[i]);
}

TEST_CASE("dijkstra single arc and disconnected target") {
  DirectedGraph g(2, 1);
  g.add_arc(0, 1, 5.0, 1);
  CHECK(dijkstra(g)[0] == 5.0);

  auto h = fixtures::example_graph(ResetMode::kNoReset);
  h.remove_arc(7, 8);
  const Eigen::VectorXd u = dijkstra(h);
  for (int i = 0; i < 8; ++i) CHECK(u[i] == kInf);
}

TEST_CASE("dijkstra matches bellman-ford on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 49);
    const auto g = fixtures::random_graph(rng, m, 3, ResetMode::kNoReset, 0.1);
    const Eigen::VectorXd a = dijkstra(g);
    const Eigen::VectorXd b = bellman_ford(g);
    for (int i = 0; i < g.size(); ++i) REQUIRE(a[i] == b[i]);
  }
}

TEST_CASE("expanded graph sizes") {
  const auto reset = fixtures::example_graph(ResetMode::kReset);
  CHECK(build_expanded_graph(reset, {3}, ResetMode::kReset).size() == 19);

  const auto plain = fixtures::example_graph(ResetMode::kNoReset);
  const ExpandedGraph g = build_expanded_graph(plain, {3}, ResetMode::kNoReset);
  CHECK(g.size() - 1 == 32);
}

TEST_CASE("zero budget keeps only zero-cost arcs") {
  const auto plain = fixtures::example_graph(ResetMode::kNoReset);
  const ExpandedGraph g = build_expanded_graph(plain, {0}, ResetMode::kNoReset);
  CHECK(g.size() == plain.size());
  int arcs = 0;
  for (int s = 0; s < g.size(); ++s) {
    for (const ExpandedArc& a : g.adjacency[s]) {
      const int from = g.states[s].node;
      const int to = g.states[a.to].node;
      bool found = false;
      for (const Arc& orig : plain.arcs(from)) found |= orig.to == to && orig.resource == 0;
      CHECK(found);
      ++arcs;
    }
  }
  int zero_arcs = 0;
  for (int i = 0; i < plain.size(); ++i) {
    for (const Arc& a : plain.arcs(i)) zero_arcs += a.resource == 0;
  }
  CHECK(arcs == zero_arcs);
}

TEST_CASE("expanded graph rejects a broken cost convention") {
  auto g = fixtures::example_graph(ResetMode::kNoReset);
  CHECK_THROWS_AS(build_expanded_graph(g, {3}, ResetMode::kReset), std::invalid_argument);
  g.arcs(2)[0].resource = 0;
  CHECK_THROWS_AS(build_expanded_graph(g, {3}, ResetMode::kNoReset), std::invalid_argument);
  CHECK_NOTHROW(build_expanded_graph(g, {3}, ResetMode::kGeneral));
}

TEST_CASE("graph text round trip") {
  const auto g = fixtures::example_graph(ResetMode::kReset);
  std::stringstream s;
  write_graph(s, g, 3);
  const GraphFile back = read_graph(s);
  CHECK(back.max_budget == 3);
  REQUIRE(back.graph.size() == g.size());
  CHECK(back.graph.target() == g.target());
  for (int i = 0; i < g.size(); ++i) {
    if (i != g.target()) CHECK(back.graph.is_safe(i) == g.is_safe(i));
    REQUIRE(back.graph.arcs(i).size() == g.arcs(i).size());
    for (std::size_t k = 0; k < g.arcs(i).size(); ++k) {
      CHECK(back.graph.arcs(i)[k].to == g.arcs(i)[k].to);
      CHECK(back.graph.arcs(i)[k].cost == g.arcs(i)[k].cost);
      CHECK(back.graph.arcs(i)[k].resource == g.arcs(i)[k].resource);
    }
  }
}

TEST_CASE("graph reader rejects malformed input") {
  std::istringstream bad_header("3 7 2\n");
  CHECK_THROWS(read_graph(bad_header));
  std::istringstream bad_arc("2 3 1\n1 3\n");
  CHECK_THROWS(read_graph(bad_arc));
}
