#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "balcut/common.hpp"
#include "balcut/graph.hpp"
#include "balcut/instance.hpp"
#include "balcut/tree.hpp"

using balcut::AdversaryOp;
using balcut::ClusterTree;
using balcut::Graph;
using balcut::Instance;
using balcut::SemiRandomSpec;

namespace {

SemiRandomSpec base_spec(int n, double eta, std::uint64_t seed) {
  SemiRandomSpec s;
  s.n = n;
  s.a = 0.4;
  s.frac_a = 0.4;
  s.eta = eta;
  s.seed = seed;
  return s;
}

std::int64_t count_cross(const Instance& inst) {
  std::int64_t c = 0;
  for (auto [u, v] : inst.graph.edges)
    if (inst.planted.side[u] != inst.planted.side[v]) ++c;
  return c;
}

}  // namespace

TEST_CASE("base instance has only cross edges, binomially many") {
  SemiRandomSpec s = base_spec(200, 0.1, 42);
  Instance inst = balcut::generate_semirandom(s);
  CHECK(inst.graph.n == 200);
  CHECK(inst.planted.count(0) == 80);  // frac_a * n
  CHECK(inst.planted.count(1) == 120);

  // No adversary: every edge crosses.
  CHECK(count_cross(inst) == inst.graph.m());
  CHECK(inst.planted_cut_value == inst.graph.m());
  CHECK(inst.cross_random_edges == inst.graph.m());
  CHECK(inst.alpha_bound == static_cast<double>(inst.cross_random_edges));

  // Binomial(80*120, 0.1): mean 960, sigma ~ 29.4; 5 sigma window.
  CHECK(inst.graph.m() > 960 - 150);
  CHECK(inst.graph.m() < 960 + 150);
}

TEST_CASE("generation is deterministic in the seed") {
  SemiRandomSpec s = base_spec(100, 0.2, 7);
  s.adversary = {{AdversaryOp::Kind::AddClique, 0, 0.5},
                 {AdversaryOp::Kind::RemoveCut, 0, 0.3}};
  Instance a = balcut::generate_semirandom(s);
  Instance b = balcut::generate_semirandom(s);
  CHECK(a.graph.edges == b.graph.edges);
  CHECK(a.planted.side == b.planted.side);
  CHECK(a.planted_cut_value == b.planted_cut_value);
  s.seed = 8;
  Instance c = balcut::generate_semirandom(s);
  CHECK(a.graph.edges != c.graph.edges);
}

TEST_CASE("adversary ops only touch their legal edge classes") {
  SemiRandomSpec s = base_spec(120, 0.15, 3);
  Instance plain = balcut::generate_semirandom(s);

  SUBCASE("AddClique adds within-side edges only") {
    s.adversary = {{AdversaryOp::Kind::AddClique, 1, 1.0}};
    Instance inst = balcut::generate_semirandom(s);
    // Cross edges identical to the base draw.
    CHECK(count_cross(inst) == plain.graph.m());
    CHECK(inst.planted_cut_value == plain.planted_cut_value);
    // Side B is a full clique now.
    std::vector<int> bs;
    for (int v = 0; v < inst.graph.n; ++v)
      if (inst.planted.side[v] == 1) bs.push_back(v);
    std::int64_t want = static_cast<std::int64_t>(bs.size()) * (static_cast<std::int64_t>(bs.size()) - 1) / 2;
    std::int64_t have = 0;
    for (auto [u, v] : inst.graph.edges)
      if (inst.planted.side[u] == 1 && inst.planted.side[v] == 1) ++have;
    CHECK(have == want);
  }

  SUBCASE("RemoveCut only deletes cross edges") {
    s.adversary = {{AdversaryOp::Kind::RemoveCut, 0, 0.5}};
    Instance inst = balcut::generate_semirandom(s);
    // alpha_bound unchanged (it is the pre-deletion count).
    CHECK(inst.cross_random_edges == plain.cross_random_edges);
    CHECK(inst.alpha_bound == plain.alpha_bound);
    // Surviving cut is a subset of the base cut.
    CHECK(inst.planted_cut_value <= plain.planted_cut_value);
    for (auto [u, v] : inst.graph.edges)
      CHECK(plain.graph.has_edge(u, v));
    // Binomial(base_cut, 0.5) within 5 sigma.
    double mean = 0.5 * static_cast<double>(plain.planted_cut_value);
    double sigma = std::sqrt(mean * 0.5);
    CHECK(std::abs(static_cast<double>(inst.planted_cut_value) - mean) < 5 * sigma + 1);
  }

  SUBCASE("RemoveCut fraction is monotone") {
    s.adversary = {{AdversaryOp::Kind::RemoveCut, 0, 0.0}};
    Instance keep = balcut::generate_semirandom(s);
    CHECK(keep.planted_cut_value == plain.planted_cut_value);
    s.adversary = {{AdversaryOp::Kind::RemoveCut, 0, 1.0}};
    Instance gone = balcut::generate_semirandom(s);
    CHECK(gone.planted_cut_value == 0);
  }

  SUBCASE("AddWithin adds the requested number of edges") {
    s.adversary = {{AdversaryOp::Kind::AddWithin, 0, 50}};
    Instance inst = balcut::generate_semirandom(s);
    CHECK(count_cross(inst) == plain.graph.m());
    std::int64_t within = inst.graph.m() - count_cross(inst);
    CHECK(within == 50);
    for (auto [u, v] : inst.graph.edges)
      if (inst.planted.side[u] == inst.planted.side[v]) CHECK(inst.planted.side[u] == 0);
  }

  SUBCASE("AddExpander leaves cross edges alone and bounds degree") {
    s.adversary = {{AdversaryOp::Kind::AddExpander, 0, 4}};
    Instance inst = balcut::generate_semirandom(s);
    CHECK(count_cross(inst) == plain.graph.m());
    // Within-side degree is at most the expander degree.
    std::vector<int> deg(static_cast<std::size_t>(inst.graph.n), 0);
    for (auto [u, v] : inst.graph.edges)
      if (inst.planted.side[u] == inst.planted.side[v]) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
      }
    for (int v = 0; v < inst.graph.n; ++v) CHECK(deg[static_cast<std::size_t>(v)] <= 4);
  }
}

TEST_CASE("spec validation rejects bad parameters") {
  SemiRandomSpec s = base_spec(10, 0.5, 1);
  s.a = 0.6;  // min side fraction beyond 1/2
  CHECK_THROWS_AS(s.validate(), balcut::InputError);
  s = base_spec(10, 1.5, 1);  // eta out of range
  CHECK_THROWS_AS(s.validate(), balcut::InputError);
  s = base_spec(0, 0.5, 1);  // empty graph
  CHECK_THROWS_AS(s.validate(), balcut::InputError);
  s = base_spec(10, 0.5, 1);
  s.frac_a = 0.05;  // |A| below the guaranteed fraction
  CHECK_THROWS_AS(s.validate(), balcut::InputError);
}

namespace {

// Balanced 3-level tree on 8 leaves: nodes 8..14 internal, root 14.
ClusterTree three_level(double w_top, double w_mid, double w_leaf) {
  ClusterTree t;
  t.n_leaves = 8;
  t.parent = {8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13, 14, 14, -1};
  t.weight.assign(15, 0.0);
  t.weight[12] = w_mid;
  t.weight[13] = w_mid;
  t.weight[14] = w_top;
  t.weight[8] = t.weight[9] = t.weight[10] = t.weight[11] = w_leaf;
  return t;
}

}  // namespace

TEST_CASE("hsm generation respects the lca probabilities") {
  // Deep pairs connect almost surely, top pairs almost never.
  ClusterTree t = three_level(0.0, 0.0, 1.0);
  t.validate();
  Graph g = balcut::generate_hsm(t, 5);
  // weight 1 at the deepest internal nodes: exactly those 4 edges.
  CHECK(g.m() == 4);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 3));
  CHECK(g.has_edge(4, 5));
  CHECK(g.has_edge(6, 7));

  ClusterTree t2 = three_level(1.0, 0.0, 0.0);
  Graph g2 = balcut::generate_hsm(t2, 5);
  // Top weight 1: all 16 cross-half pairs, nothing else.
  CHECK(g2.m() == 16);
  for (auto [u, v] : g2.edges) CHECK(((u < 4) != (v < 4)));
}

TEST_CASE("hsm generation is deterministic and seed-sensitive") {
  ClusterTree t = three_level(0.2, 0.5, 0.9);
  Graph a = balcut::generate_hsm(t, 11);
  Graph b = balcut::generate_hsm(t, 11);
  CHECK(a.edges == b.edges);
  Graph c = balcut::generate_hsm(t, 12);
  CHECK(a.edges != c.edges);
}

TEST_CASE("expected hsm cost closed form matches the pair sum") {
  ClusterTree t = three_level(0.1, 0.3, 0.8);
  double closed = balcut::expected_hsm_cost(t);
  double pairs = balcut::expected_hsm_cost_pairs(t);
  CHECK(closed == doctest::Approx(pairs).epsilon(1e-12));
  // Hand value: top 0.1*4*4*8 = 12.8; mid 2 * (0.3*2*2*4) = 9.6;
  // leaf 4 * (0.8*1*1*2) = 6.4. Total 28.8.
  CHECK(closed == doctest::Approx(28.8).epsilon(1e-12));
}

TEST_CASE("hsm edge frequencies match weights across seeds") {
  ClusterTree t = three_level(0.25, 0.0, 0.0);
  int hits = 0;
  const int trials = 2000;
  for (int s = 0; s < trials; ++s) {
    Graph g = balcut::generate_hsm(t, static_cast<std::uint64_t>(s));
    if (g.has_edge(0, 7)) ++hits;  // lca = root, probability 0.25
  }
  // Binomial(2000, 0.25): mean 500, sigma ~ 19.4; 5 sigma window.
  CHECK(hits > 400);
  CHECK(hits < 600);
}
