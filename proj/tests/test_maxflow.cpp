#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "balcut/graph.hpp"
#include "balcut/maxflow.hpp"
#include "balcut/refcheck.hpp"
#include "balcut/rng.hpp"

using balcut::FlowPath;
using balcut::FlowResult;
using balcut::Graph;
using balcut::Rng;

namespace {

// Checks flow conservation at every non-terminal vertex and the terminal
// balance identities.
void check_conservation(const Graph& g, const std::vector<int>& sources,
                        const std::vector<int>& sinks, const FlowResult& fr) {
  std::vector<double> net(static_cast<std::size_t>(g.n), 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    net[static_cast<std::size_t>(u)] -= fr.edge_flows[e];
    net[static_cast<std::size_t>(v)] += fr.edge_flows[e];
  }
  std::vector<double> inj(static_cast<std::size_t>(g.n), 0.0);
  for (std::size_t i = 0; i < sources.size(); ++i)
    inj[static_cast<std::size_t>(sources[i])] += fr.injections[i];
  for (std::size_t i = 0; i < sinks.size(); ++i)
    inj[static_cast<std::size_t>(sinks[i])] -= fr.ejections[i];
  for (int v = 0; v < g.n; ++v)
    CHECK(net[static_cast<std::size_t>(v)] + inj[static_cast<std::size_t>(v)] == 0.0);

  double total_in = 0, total_out = 0;
  for (double x : fr.injections) total_in += x;
  for (double x : fr.ejections) total_out += x;
  CHECK(total_in == fr.value);
  CHECK(total_out == fr.value);
}

bool is_dyadic_16(double x) {
  double scaled = std::ldexp(x, 16);
  return scaled == std::floor(scaled);
}

}  // namespace

TEST_CASE("path graph with fractional terminal capacity") {
  // 0 - 1 - 2, source {0}, sink {2}, d = 0.5: the terminal arcs bind.
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  FlowResult fr = max_flow_dregular(g, {0}, {2}, 0.5);
  CHECK(fr.value == 0.5);
  CHECK(fr.edge_flows[0] == 0.5);
  CHECK(fr.edge_flows[1] == 0.5);
  check_conservation(g, {0}, {2}, fr);
}

TEST_CASE("diamond routes two unit paths") {
  // 0 -> {1, 2} -> 3 with d = 2: both length-2 paths saturate.
  Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  FlowResult fr = max_flow_dregular(g, {0}, {3}, 2.0);
  CHECK(fr.value == 2.0);
  check_conservation(g, {0}, {3}, fr);

  auto paths = flow_path_decompose(g, {0}, {3}, fr);
  REQUIRE(paths.size() == 2);
  double total = 0;
  for (const auto& p : paths) {
    CHECK(p.src == 0);
    CHECK(p.dst == 3);
    CHECK(p.amount == 1.0);
    REQUIRE(p.nodes.size() == 3);
    CHECK(p.nodes.front() == 0);
    CHECK(p.nodes.back() == 3);
    total += p.amount;
  }
  CHECK(total == fr.value);
}

TEST_CASE("mincut partition separates terminals") {
  // Bottleneck edge (2,3) between two triangles.
  Graph g = Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
  FlowResult fr = max_flow_dregular(g, {0, 1}, {4, 5}, 10.0);
  CHECK(fr.value == 1.0);  // the single bridge, capacity 1
  // Side 0 holds the sources, side 1 the sinks.
  CHECK(fr.mincut.side[0] == 0);
  CHECK(fr.mincut.side[1] == 0);
  CHECK(fr.mincut.side[4] == 1);
  CHECK(fr.mincut.side[5] == 1);
  CHECK(cut_value(g, fr.mincut) == 1);
}

TEST_CASE("terminal capacity above the vertex count does not overflow") {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  FlowResult fr = max_flow_dregular(g, {0}, {3}, 1e18);
  CHECK(fr.value == 1.0);  // path capacity binds
  check_conservation(g, {0}, {3}, fr);
}

TEST_CASE("injections never exceed the terminal capacity") {
  Graph g = Graph::from_edges(5, {{0, 2}, {1, 2}, {2, 3}, {2, 4}});
  FlowResult fr = max_flow_dregular(g, {0, 1}, {3, 4}, 0.75);
  CHECK(fr.value == 1.5);
  for (double x : fr.injections) CHECK(x <= 0.75);
  for (double x : fr.ejections) CHECK(x <= 0.75);
  check_conservation(g, {0, 1}, {3, 4}, fr);
}

TEST_CASE("random graphs match the exhaustive terminal mincut exactly") {
  // 200 random instances, n <= 12; flow value must equal the brute-force
  // mincut of the terminal-augmented graph, exactly (dyadic arithmetic).
  Rng rng(5150);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng.next_below(9));  // 4..12
    double p = rng.next_uniform(0.15, 0.6);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_double() < p) edges.emplace_back(i, j);
    Graph g = Graph::from_edges(n, std::move(edges));

    // Disjoint nonempty terminal sets.
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    rng.shuffle(ids);
    int ns = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n / 2)));
    int nt = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - ns)));
    std::vector<int> sources(ids.begin(), ids.begin() + ns);
    std::vector<int> sinks(ids.begin() + ns, ids.begin() + ns + nt);

    // Dyadic representable terminal capacity.
    double d = static_cast<double>(1 + rng.next_below(8)) / 4.0;

    FlowResult fr = max_flow_dregular(g, sources, sinks, d);
    double ref = balcut::exact_min_stcut_terminal(g, sources, sinks, d);
    CHECK(fr.value == ref);
    CHECK(is_dyadic_16(fr.value));
    check_conservation(g, sources, sinks, fr);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("path decomposition accounts for the full flow on random instances") {
  Rng rng(6001);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 5 + static_cast<int>(rng.next_below(8));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_double() < 0.4) edges.emplace_back(i, j);
    Graph g = Graph::from_edges(n, std::move(edges));
    std::vector<int> sources = {0, 1};
    std::vector<int> sinks = {n - 2, n - 1};
    FlowResult fr = max_flow_dregular(g, sources, sinks, 1.5);
    auto paths = flow_path_decompose(g, sources, sinks, fr);

    double total = 0;
    for (const auto& p : paths) {
      CHECK(p.amount > 0);
      REQUIRE(!p.nodes.empty());
      CHECK(p.nodes.front() == p.src);
      CHECK(p.nodes.back() == p.dst);
      CHECK((p.src == 0 || p.src == 1));
      CHECK((p.dst == n - 2 || p.dst == n - 1));
      // Consecutive nodes are graph edges.
      for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k)
        CHECK(g.has_edge(p.nodes[k], p.nodes[k + 1]));
      total += p.amount;
    }
    CHECK(total == doctest::Approx(fr.value).epsilon(1e-12));
    CHECK(paths.size() <= static_cast<std::size_t>(g.m() + 2 * g.n));
  }
}
