#include "balcut/refcheck.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {
namespace {

Eigen::MatrixXd to_eigen(const DenseSym& m) {
  Eigen::MatrixXd out(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out(i, j) = m.at(i, j);
  return out;
}

DenseSym from_eigen(const Eigen::MatrixXd& e) {
  DenseSym out = DenseSym::zero(static_cast<int>(e.rows()));
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) out.at(i, j) = e(i, j);
  return out;
}

}  // namespace

DenseSym densify(const std::vector<std::pair<LapTerm, double>>& terms, int n) {
  DenseSym out = DenseSym::zero(n);
  std::vector<double> basis(n, 0.0), col(n, 0.0);
  for (int j = 0; j < n; ++j) {
    basis[j] = 1.0;
    std::fill(col.begin(), col.end(), 0.0);
    for (const auto& [t, w] : terms) lapterm_apply_add(t, w, basis.data(), col.data(), n);
    for (int i = 0; i < n; ++i) out.at(i, j) = col[i];
    basis[j] = 0.0;
  }
  return out;
}

DenseSym dense_expm(const DenseSym& m) {
  BALCUT_REQUIRE(m.n <= 128, "dense_expm capped at n = 128");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
  BALCUT_REQUIRE(es.info() == Eigen::Success, "eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues().array().exp();
  Eigen::MatrixXd out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return from_eigen(out);
}

double dense_lambda_min(const DenseSym& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double dense_lambda_max(const DenseSym& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double dense_opnorm(const DenseSym& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double dense_trace(const DenseSym& m) {
  double t = 0;
  for (int i = 0; i < m.n; ++i) t += m.at(i, i);
  return t;
}

DenseSym dense_scale(const DenseSym& m, double c) {
  DenseSym out = m;
  for (auto& x : out.a) x *= c;
  return out;
}

DenseSym dense_add(const DenseSym& a, const DenseSym& b) {
  BALCUT_ASSERT(a.n == b.n, "dense_add size mismatch");
  DenseSym out = a;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += b.a[i];
  return out;
}

double dense_inner(const DenseSym& a, const DenseSym& b) {
  BALCUT_ASSERT(a.n == b.n, "dense_inner size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.a.size(); ++i) s += a.a[i] * b.a[i];
  return s;
}

bool dense_psd_check(const std::vector<std::pair<LapTerm, double>>& terms, int n, double tol) {
  BALCUT_REQUIRE(n <= 128, "dense_psd_check capped at n = 128");
  return dense_lambda_min(densify(terms, n)) >= -tol;
}

double power_iteration_norm(const std::function<void(const double*, double*)>& matvec,
                            int n, double tol, int max_iters, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = rng.next_gaussian();
  double est = 0;
  for (int it = 0; it < max_iters; ++it) {
    matvec(x.data(), y.data());
    double norm = 0;
    for (int i = 0; i < n; ++i) norm += y[i] * y[i];
    norm = std::sqrt(norm);
    if (norm == 0) return 0;  // x in the kernel and likely M = 0
    double prev = est;
    est = norm;  // ||Mx|| with ||x|| = 1 converges to the top |eigenvalue|
    for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (it > 8 && std::abs(est - prev) <= tol * std::max(1.0, est)) break;
  }
  return est;
}

std::int64_t exact_min_balanced_cut(const Graph& g, double a) {
  BALCUT_REQUIRE(g.n >= 1 && g.n <= 20, "exact_min_balanced_cut capped at n = 20");
  BALCUT_REQUIRE(a > 0 && a <= 0.5, "balance parameter must be in (0, 1/2]");
  int floor_side = static_cast<int>(std::ceil(a * g.n - 1e-9));
  std::vector<std::uint32_t> nbr(g.n, 0);
  for (auto [u, v] : g.edges) {
    nbr[u] |= 1u << v;
    nbr[v] |= 1u << u;
  }
  std::int64_t best = -1;
  std::uint32_t full = (g.n == 32) ? ~0u : ((1u << g.n) - 1);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    int cnt = std::popcount(mask);
    if (cnt < floor_side || g.n - cnt < floor_side) continue;
    std::int64_t cut = 0;
    std::uint32_t rest = full & ~mask;
    for (std::uint32_t s = mask; s;) {
      int v = std::countr_zero(s);
      s &= s - 1;
      cut += std::popcount(nbr[v] & rest);
    }
    if (best < 0 || cut < best) best = cut;
  }
  return best;
}

double exact_min_stcut_terminal(const Graph& g, const std::vector<int>& sources,
                                const std::vector<int>& sinks, double d) {
  BALCUT_REQUIRE(g.n <= 20, "exact_min_stcut_terminal capped at n = 20");
  double d_eff = std::min(d, static_cast<double>(g.n));
  std::uint32_t full = (1u << g.n) - 1;
  double best = std::numeric_limits<double>::infinity();
  // S = source side (super-source implicit). Terminal arcs cut: sources
  // outside S (super-source -> v) and sinks inside S (v -> super-sink).
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    double cap = 0;
    for (auto [u, v] : g.edges) {
      bool iu = (mask >> u) & 1, iv = (mask >> v) & 1;
      if (iu != iv) cap += 1.0;
    }
    for (int v : sources) {
      if (!((mask >> v) & 1)) cap += d_eff;
    }
    for (int v : sinks) {
      if ((mask >> v) & 1) cap += d_eff;
    }
    best = std::min(best, cap);
  }
  return best;
}

std::int64_t enumerate_trees_min_cost(const Graph& g) {
  BALCUT_REQUIRE(g.n >= 1 && g.n <= 7, "enumerate_trees_min_cost capped at n = 7");
  int n = g.n;
  std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> nbr(n, 0);
  for (auto [u, v] : g.edges) {
    nbr[u] |= 1u << v;
    nbr[v] |= 1u << u;
  }
  auto cut_between = [&](std::uint32_t a, std::uint32_t b) {
    std::int64_t c = 0;
    for (std::uint32_t s = a; s;) {
      int v = std::countr_zero(s);
      s &= s - 1;
      c += std::popcount(nbr[v] & b);
    }
    return c;
  };
  std::vector<std::int64_t> cost(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    int sz = std::popcount(mask);
    std::uint32_t low = mask & (~mask + 1);  // lowest set bit stays on the left side
    std::uint32_t rest = mask ^ low;
    // Enumerate submasks of `rest` as the right side's complement partner.
    for (std::uint32_t sub = rest; sub; sub = (sub - 1) & rest) {
      std::uint32_t right = sub;
      std::uint32_t left = mask ^ right;
      std::int64_t c = static_cast<std::int64_t>(sz) * cut_between(left, right) +
                       cost[left] + cost[right];
      best = std::min(best, c);
    }
    cost[mask] = best;
  }
  return cost[full];
}

}  // namespace balcut
