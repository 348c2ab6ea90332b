#pragma once

#include <cstdint>
#include <vector>

#include "balcut/graph.hpp"

namespace balcut {

// Sketched vector embedding: column i is the d-dimensional vector of vertex i.
// Represents the PSD matrix X = W^T W without ever forming it; trace_scale is
// the intended trace of X (sum of squared column norms).
struct Embedding {
  int d = 0;
  int n = 0;
  double trace_scale = 0.0;
  std::vector<double> vecs;  // column-major, size d*n

  const double* col(int i) const { return vecs.data() + static_cast<std::size_t>(i) * d; }
  double* col(int i) { return vecs.data() + static_cast<std::size_t>(i) * d; }

  double norm2(int i) const;
  double sqdist(int i, int j) const;

  // Throws if dimensions or the trace invariant are violated.
  void validate(double rel_tol = 1e-6) const;
};

// Sum of squared distances over the edges of g.
double objective(const Graph& g, const Embedding& w);

// Sum over ORDERED pairs (i, j) in S of squared distances.
double spread(const Embedding& w, const std::vector<int>& s);

// Vertices with squared norm above `threshold` (default 2), ascending.
std::vector<int> tall_set(const Embedding& w, double threshold = 2.0);

// sq(i,j) + sq(j,k) - sq(i,k); negative means the triple violates the
// triangle inequality in squared distance.
double triangle_violation(const Embedding& w, int i, int j, int k);

// Dense Gaussian sketch with entries N(0, 1/d), addressed by (row, col) so
// application order never matters. The input dimension is whatever the
// argument carries; the output dimension is fixed at construction.
struct GaussianSketch {
  int d = 0;
  std::uint64_t seed = 0;

  GaussianSketch(int d_out, std::uint64_t seed);

  // Entry (row, c) of the sketch matrix, scaling included.
  double entry(int row, std::uint64_t c) const;

  // Row `row` restricted to the first `count` columns, scaling included.
  std::vector<double> row(int row, std::uint64_t count) const;
};

// out = Phi * input, where input is d_in x n column-major. Returns d x n.
std::vector<double> sketch_apply(const GaussianSketch& s, const std::vector<double>& input,
                                 int d_in, int n);

// Default sketch dimension for an n-vertex problem.
int default_sketch_dim(int n);

}  // namespace balcut
