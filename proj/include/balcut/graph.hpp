#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace balcut {

// Simple undirected graph. Edges are stored canonically: (min, max), sorted,
// no duplicates, no self-loops.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;

  static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list);

  int m() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;

  // Induced subgraph on `keep` (compact ids in `keep` order). `old_to_new`
  // gets -1 for dropped vertices.
  Graph induced(const std::vector<int>& keep, std::vector<int>* old_to_new = nullptr) const;

  // Copy with the listed edges removed (list entries may be unordered pairs).
  Graph without_edges(const std::vector<std::pair<int, int>>& removed) const;
};

// Vertex labelling. Bipartitions use labels {0, 1}; tripartitions {0, 1, 2}.
struct Partition {
  std::vector<std::int8_t> side;

  int n() const { return static_cast<int>(side.size()); }
  std::int64_t count(int label) const;
  int min_side() const;  // smaller of label-0 / label-1 counts
};

// Number of edges with endpoints on different sides (any label difference).
std::int64_t cut_value(const Graph& g, const Partition& p);

}  // namespace balcut
