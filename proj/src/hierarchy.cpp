#include "balcut/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {

int ClusterTree::root() const {
  for (int v = 0; v < n_nodes(); ++v)
    if (parent[v] < 0) return v;
  throw InputError("tree has no root");
}

std::vector<std::vector<int>> ClusterTree::children() const {
  std::vector<std::vector<int>> ch(n_nodes());
  for (int v = 0; v < n_nodes(); ++v) {
    if (parent[v] >= 0) ch[parent[v]].push_back(v);
  }
  return ch;
}

std::vector<std::int64_t> ClusterTree::leaf_counts() const {
  std::vector<std::int64_t> cnt(n_nodes(), 0);
  // Accumulate bottom-up: process nodes in decreasing depth.
  std::vector<int> order(n_nodes());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> depth(n_nodes(), 0);
  for (int v = 0; v < n_nodes(); ++v) {
    int u = v, d = 0;
    while (parent[u] >= 0) {
      u = parent[u];
      ++d;
      BALCUT_REQUIRE(d <= n_nodes(), "parent chain has a cycle");
    }
    depth[v] = d;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return depth[x] > depth[y]; });
  for (int v : order) {
    if (v < n_leaves) cnt[v] = 1;
    if (parent[v] >= 0) cnt[parent[v]] += cnt[v];
  }
  return cnt;
}

int ClusterTree::lca(int u, int v) const {
  auto depth_of = [&](int x) {
    int d = 0;
    while (parent[x] >= 0) {
      x = parent[x];
      ++d;
    }
    return d;
  };
  int du = depth_of(u), dv = depth_of(v);
  while (du > dv) {
    u = parent[u];
    --du;
  }
  while (dv > du) {
    v = parent[v];
    --dv;
  }
  while (u != v) {
    u = parent[u];
    v = parent[v];
  }
  return u;
}

void ClusterTree::validate() const {
  BALCUT_REQUIRE(n_leaves >= 1, "tree needs at least one leaf");
  int nn = n_nodes();
  BALCUT_REQUIRE(nn == 2 * n_leaves - 1, "full binary tree has 2n-1 nodes");
  BALCUT_REQUIRE(weight.size() == parent.size(), "weight vector size mismatch");
  int roots = 0;
  std::vector<int> deg(nn, 0);
  for (int v = 0; v < nn; ++v) {
    if (parent[v] < 0) {
      ++roots;
    } else {
      BALCUT_REQUIRE(parent[v] < nn, "parent index out of range");
      BALCUT_REQUIRE(parent[v] >= n_leaves, "leaves cannot be parents");
      ++deg[parent[v]];
    }
    BALCUT_REQUIRE(weight[v] >= 0 && weight[v] <= 1, "weights must lie in [0, 1]");
  }
  BALCUT_REQUIRE(roots == 1, "tree must have exactly one root");
  for (int v = 0; v < n_leaves; ++v)
    BALCUT_REQUIRE(deg[v] == 0, "leaf with children");
  for (int v = n_leaves; v < nn; ++v)
    BALCUT_REQUIRE(deg[v] == 2, "internal node without exactly two children");
  // Acyclic by the parent-chain walk below (throws on a cycle).
  leaf_counts();
}

double dasgupta_cost(const Graph& g, const ClusterTree& t) {
  BALCUT_REQUIRE(g.n == t.n_leaves, "graph and tree disagree on vertex count");
  t.validate();
  std::vector<std::int64_t> cnt = t.leaf_counts();
  double cost = 0;
  for (const auto& e : g.edges) {
    cost += static_cast<double>(cnt[t.lca(e.first, e.second)]);
  }
  return cost;
}

void ClusterConfig::validate() const {
  BALCUT_REQUIRE(b > 0 && b <= 0.5, "split balance must lie in (0, 1/2]");
  BALCUT_REQUIRE(alpha_mode == "auto" || alpha_mode == "estimate" || alpha_mode == "fixed",
                 "alpha mode must be auto, estimate, or fixed");
  if (alpha_mode == "fixed")
    BALCUT_REQUIRE(fixed_alpha > 0, "fixed alpha mode needs a positive alpha");
}

int size_floor_eff(const ClusterConfig& cfg, int n) {
  if (cfg.size_floor >= 0) return cfg.size_floor;
  return std::max(8, static_cast<int>(std::ceil(std::pow(double(n), 2.0 / 3.0))));
}

namespace {

struct TreeBuilder {
  const Graph& g;
  const ClusterConfig& cfg;
  JsonlLogger* log;
  int floor_sz;
  int next_internal;
  ClusterTree tree;

  TreeBuilder(const Graph& graph, const ClusterConfig& c, JsonlLogger* l)
      : g(graph), cfg(c), log(l), floor_sz(size_floor_eff(c, graph.n)), next_internal(graph.n) {
    tree.n_leaves = g.n;
    tree.parent.assign(2 * g.n - 1, -1);
    tree.weight.assign(2 * g.n - 1, 0.0);
  }

  // Even split in id order, left side one larger on odd sizes.
  std::pair<std::vector<int>, std::vector<int>> arbitrary_split(
      const std::vector<int>& vs) const {
    std::size_t half = (vs.size() + 1) / 2;
    return {{vs.begin(), vs.begin() + half}, {vs.begin() + half, vs.end()}};
  }

  int build(const std::vector<int>& vs, int depth) {
    BALCUT_ASSERT(!vs.empty(), "cluster recursion on empty set");
    if (vs.size() == 1) return vs[0];

    std::vector<int> left, right;
    bool solved = false;
    Graph sub = g.induced(vs);
    if (static_cast<int>(vs.size()) >= floor_sz && sub.m() > 0) {
      DriverConfig dc = cfg.driver;
      dc.a = cfg.b;
      dc.seed = Rng(cfg.seed)
                    .substream(0x4843)
                    .substream(static_cast<std::uint64_t>(next_internal))
                    .next_u64();
      if (cfg.alpha_mode == "fixed") {
        dc.alpha = cfg.fixed_alpha;
      } else if (cfg.alpha_mode == "estimate") {
        DriverConfig probe = dc;
        probe.alpha = 1;  // placeholder; estimate overwrites per trial
        AlphaEstimate est = estimate_alpha(sub, probe, log);
        dc.alpha = est.alpha;
      } else {
        dc.alpha = std::max(1.0, sub.m() / 4.0);
      }
      CutResult res = solve_balanced_cut(sub, dc, log);
      int floor_side = static_cast<int>(std::ceil(cfg.b / 10.0 * vs.size()));
      if (res.min_side >= std::max(1, floor_side)) {
        for (std::size_t i = 0; i < vs.size(); ++i) {
          (res.partition.side[i] == 0 ? left : right).push_back(vs[i]);
        }
        solved = true;
      } else if (log && log->enabled()) {
        log->line({{"event", "cluster_split_degraded"},
                   {"size", vs.size()},
                   {"depth", depth},
                   {"min_side", res.min_side}});
      }
    }
    if (!solved) {
      auto [l, r] = arbitrary_split(vs);
      left = std::move(l);
      right = std::move(r);
    }

    int lid = build(left, depth + 1);
    int rid = build(right, depth + 1);
    int id = next_internal++;
    BALCUT_ASSERT(id < tree.n_nodes(), "internal node id overflow");
    tree.parent[lid] = id;
    tree.parent[rid] = id;
    return id;
  }
};

}  // namespace

ClusterTree recursive_cluster(const Graph& g, const ClusterConfig& cfg, JsonlLogger* log) {
  cfg.validate();
  BALCUT_REQUIRE(g.n >= 1, "graph must have at least one vertex");
  if (g.n == 1) {
    ClusterTree t;
    t.n_leaves = 1;
    t.parent = {-1};
    t.weight = {0.0};
    return t;
  }
  TreeBuilder b(g, cfg, log);
  std::vector<int> all(g.n);
  std::iota(all.begin(), all.end(), 0);
  int root = b.build(all, 0);
  BALCUT_ASSERT(root == 2 * g.n - 2, "root must be the last internal node");
  b.tree.validate();
  return b.tree;
}

}  // namespace balcut
