#pragma once

#include <cstdint>
#include <vector>

#include "balcut/graph.hpp"

namespace balcut {

// Rooted full binary tree over graph vertices. Leaves are nodes 0..n_leaves-1
// and leaf id equals vertex id; internal nodes follow. parent[root] == -1.
// weight carries an optional per-internal-node connection probability used by
// the generative model; it is ignored by cost evaluation.
struct ClusterTree {
  int n_leaves = 0;
  std::vector<int> parent;
  std::vector<double> weight;

  int n_nodes() const { return static_cast<int>(parent.size()); }
  int root() const;

  // children()[v] lists the children of v in ascending order.
  std::vector<std::vector<int>> children() const;

  // Leaves in the subtree of each node.
  std::vector<std::int64_t> leaf_counts() const;

  // Lowest common ancestor of two nodes.
  int lca(int u, int v) const;

  // Throws InputError unless this is a full binary tree with the leaf/internal
  // id layout described above and weights in [0, 1].
  void validate() const;
};

// Sum over edges of the leaf count under the endpoints' lowest common
// ancestor (smaller is better).
double dasgupta_cost(const Graph& g, const ClusterTree& t);

}  // namespace balcut
