#include "balcut/graph.hpp"

#include <algorithm>

#include "balcut/common.hpp"

namespace balcut {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list) {
  BALCUT_REQUIRE(n >= 0, "vertex count must be nonnegative");
  for (auto& [u, v] : edge_list) {
    BALCUT_REQUIRE(u >= 0 && u < n && v >= 0 && v < n, "edge endpoint out of range");
    BALCUT_REQUIRE(u != v, "self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edge_list.begin(), edge_list.end());
  edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

  Graph g;
  g.n = n;
  g.edges = std::move(edge_list);
  g.adj.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

Graph Graph::induced(const std::vector<int>& keep, std::vector<int>* old_to_new) const {
  std::vector<int> map(n, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int v = keep[i];
    BALCUT_REQUIRE(v >= 0 && v < n, "induced: vertex out of range");
    BALCUT_REQUIRE(map[v] == -1, "induced: duplicate vertex");
    map[v] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> kept;
  for (auto [u, v] : edges) {
    if (map[u] >= 0 && map[v] >= 0) kept.emplace_back(map[u], map[v]);
  }
  if (old_to_new) *old_to_new = map;
  return from_edges(static_cast<int>(keep.size()), std::move(kept));
}

Graph Graph::without_edges(const std::vector<std::pair<int, int>>& removed) const {
  std::vector<std::pair<int, int>> gone = removed;
  for (auto& [u, v] : gone) {
    if (u > v) std::swap(u, v);
  }
  std::sort(gone.begin(), gone.end());
  std::vector<std::pair<int, int>> kept;
  kept.reserve(edges.size());
  for (auto e : edges) {
    if (!std::binary_search(gone.begin(), gone.end(), e)) kept.push_back(e);
  }
  return from_edges(n, std::move(kept));
}

std::int64_t Partition::count(int label) const {
  std::int64_t c = 0;
  for (auto s : side) {
    if (s == label) ++c;
  }
  return c;
}

int Partition::min_side() const {
  return static_cast<int>(std::min(count(0), count(1)));
}

std::int64_t cut_value(const Graph& g, const Partition& p) {
  BALCUT_REQUIRE(p.n() == g.n, "partition size mismatch");
  std::int64_t c = 0;
  for (auto [u, v] : g.edges) {
    if (p.side[u] != p.side[v]) ++c;
  }
  return c;
}

}  // namespace balcut
