#pragma once

#include <cstddef>
#include <vector>

#include "balcut/embedding.hpp"

namespace balcut {

// Structured symmetric matrix term with an O(support) matrix-vector product.
// Feedback matrices are weighted sums of these; the n x n matrix is never
// materialized outside the dense reference checks.
struct LapTerm {
  enum class Kind {
    EdgeLaplacian,      // L_{ij} of the pair (i, j); the pair need not be an edge
    CompleteLaplacian,  // complete-graph Laplacian on vertex set `set`
    PathTriple,         // L_{ij} + L_{jk} - L_{ik}
    Diagonal,           // diag(diag)
    Identity,           // scale * Id
  };

  Kind kind;
  int i = -1, j = -1, k = -1;
  std::vector<int> set;
  std::vector<double> diag;
  double scale = 1.0;

  static LapTerm edge(int i, int j);
  static LapTerm complete(std::vector<int> set);
  static LapTerm path_triple(int i, int j, int k);
  static LapTerm diagonal(std::vector<double> diag);
  static LapTerm identity(double scale);

  // Nonzero-entry support size: O(m + n) audit for feedback assembly.
  std::size_t entry_support(int n) const;
};

// y = t * x (overwrites y). x and y have length n.
void lapterm_matvec(const LapTerm& t, const double* x, double* y, int n);

// y += w * (t * x).
void lapterm_apply_add(const LapTerm& t, double w, const double* x, double* y, int n);

// Blocked variant: x and y hold d values per vertex (vertex-major, as in
// Embedding::vecs); applies t to every lane in one pass over the support.
void lapterm_apply_add_block(const LapTerm& t, double w, const double* x, double* y, int n,
                             int d);

// <t, W^T W>, computed with d row-wise matvecs; X = W^T W is never formed.
double quadform(const LapTerm& t, const Embedding& w);

}  // namespace balcut
