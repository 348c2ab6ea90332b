#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "balcut/graph.hpp"
#include "balcut/lapterm.hpp"

namespace balcut {

// Dense reference computations used by tests and audits. Everything here is
// brute force or eigendecomposition based, for small sizes only; production
// paths never call into this header.

struct DenseSym {
  int n = 0;
  std::vector<double> a;  // row-major n*n

  static DenseSym zero(int n) { return DenseSym{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)}; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// Weighted term sum as a dense matrix (built by matvec on basis vectors).
DenseSym densify(const std::vector<std::pair<LapTerm, double>>& terms, int n);

// Matrix exponential of a symmetric matrix via eigendecomposition. n <= 128.
DenseSym dense_expm(const DenseSym& m);

double dense_lambda_min(const DenseSym& m);
double dense_lambda_max(const DenseSym& m);
double dense_opnorm(const DenseSym& m);  // max |eigenvalue|
double dense_trace(const DenseSym& m);
DenseSym dense_scale(const DenseSym& m, double c);
DenseSym dense_add(const DenseSym& a, const DenseSym& b);
double dense_inner(const DenseSym& a, const DenseSym& b);

// lambda_min(sum of terms) >= -tol. n <= 128.
bool dense_psd_check(const std::vector<std::pair<LapTerm, double>>& terms, int n,
                     double tol = 1e-9);

// Spectral norm estimate of a symmetric operator given only a matvec, by
// power iteration with a seeded random start (relative tolerance `tol`).
double power_iteration_norm(const std::function<void(const double*, double*)>& matvec,
                            int n, double tol = 1e-6, int max_iters = 20000,
                            std::uint64_t seed = 1);

// Minimum cut over bipartitions with both sides >= a*n; exhaustive, n <= 20.
// Returns -1 if no bipartition satisfies the balance constraint.
std::int64_t exact_min_balanced_cut(const Graph& g, double a);

// Exhaustive min cut of the terminal-augmented graph: unit capacities on
// edges (per direction), capacity d from a super-source to each source and
// from each sink to a super-sink. n <= 20.
double exact_min_stcut_terminal(const Graph& g, const std::vector<int>& sources,
                                const std::vector<int>& sinks, double d);

// Minimum, over all binary laminar trees on the vertices, of
// sum over internal nodes of |leaves(node)| * cut(left, right). n <= 7.
std::int64_t enumerate_trees_min_cost(const Graph& g);

}  // namespace balcut
