#pragma once

#include <cstdint>
#include <vector>

#include "balcut/graph.hpp"
#include "balcut/tree.hpp"

namespace balcut {

// One post-processing step applied to the random bipartite base graph.
// The adversary may add edges inside a side and delete edges across; it never
// adds cross edges or deletes within-side edges.
struct AdversaryOp {
  enum class Kind { AddWithin, RemoveCut, AddClique, AddExpander };
  Kind kind = Kind::AddWithin;
  int side = 0;      // 0 or 1; ignored by RemoveCut
  double value = 0;  // AddWithin: edge count; RemoveCut: deletion probability;
                     // AddClique: fraction of the side; AddExpander: degree
};

struct SemiRandomSpec {
  int n = 0;
  double a = 0.4;      // guaranteed min side fraction
  double frac_a = -1;  // |A| = round(frac_a * n); <0: ceil(a * n)
  double eta = 0.05;   // cross-pair edge probability
  std::vector<AdversaryOp> adversary;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Instance {
  Graph graph;
  Partition planted;  // 0 = A, 1 = B
  std::int64_t planted_cut_value = 0;     // cross edges after the adversary
  std::int64_t cross_random_edges = 0;    // cross edges before any deletion
  double alpha_bound = 0;                 // == cross_random_edges
};

// Planted balanced-cut instance: side assignment, i.i.d. cross edges, then
// the adversary ops in order. Fully determined by the spec (seed included).
Instance generate_semirandom(const SemiRandomSpec& spec);

// Random graph drawn from a weighted cluster tree: leaves u < v connect
// independently with probability weight[lca(u, v)].
Graph generate_hsm(const ClusterTree& t, std::uint64_t seed);

// Expected tree cost of the generative model above, closed form:
// sum over internal nodes of weight * |L| * |R| * leaf_count.
double expected_hsm_cost(const ClusterTree& t);
// Same quantity as an explicit sum over leaf pairs (identity check).
double expected_hsm_cost_pairs(const ClusterTree& t);

}  // namespace balcut
