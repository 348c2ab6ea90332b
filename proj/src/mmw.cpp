#include "balcut/mmw.hpp"

#include <cmath>

#include "balcut/rng.hpp"

namespace balcut {

NormalizedFeedback normalize_feedback(FeedbackMatrix m, double zeta) {
  BALCUT_REQUIRE(zeta > 0 && std::isfinite(zeta), "zeta must be positive");
  BALCUT_ASSERT(m.width_bound <= zeta * (1.0 + 1e-9),
                "feedback width exceeds normalization scale");
  NormalizedFeedback y;
  y.m = std::move(m);
  y.zeta = zeta;
  return y;
}

void MmwConfig::validate() const {
  BALCUT_REQUIRE(n > 0, "iterate dimension must be positive");
  BALCUT_REQUIRE(r > 0, "trace target must be positive");
  BALCUT_REQUIRE(d > 0, "sketch dimension must be positive");
  BALCUT_REQUIRE(epsilon > 0 && epsilon < 4, "epsilon out of range");
  BALCUT_REQUIRE(T >= 1, "iteration budget must be >= 1");
  BALCUT_REQUIRE(p >= 1, "Taylor degree must be >= 1");
  BALCUT_REQUIRE(gamma > 0 && gamma <= 0.5, "gamma must be in (0, 1/2]");
  if (relax_couplings) return;
  double ln_n = std::log(std::max(2, n));
  BALCUT_REQUIRE(alpha > 0 && zeta > 0, "coupling check needs alpha and zeta");
  BALCUT_REQUIRE(epsilon <= gamma * alpha / (2.0 * zeta * r),
                 "epsilon violates the width coupling; set relax_couplings to override");
  BALCUT_REQUIRE(static_cast<double>(T) >= 2.0 * ln_n / (epsilon * epsilon),
                 "T violates the regret coupling; set relax_couplings to override");
  BALCUT_REQUIRE(static_cast<double>(p) >= 10.0 * ln_n / epsilon,
                 "p violates the Taylor coupling; set relax_couplings to override");
}

void taylor_exp_apply(const std::vector<NormalizedFeedback>& ys, double epsilon, int p,
                      const double* v, double* out, int n) {
  // Horner: u_p = v; u_{k-1} = v + A u_k / k; u_0 = P_{<=p}(A) v.
  std::vector<double> u(v, v + n), au(n);
  double half_eps = 0.5 * epsilon;
  for (int k = p; k >= 1; --k) {
    std::fill(au.begin(), au.end(), 0.0);
    for (const auto& y : ys) {
      double inv = 1.0 / (2.0 * y.zeta);
      for (int i = 0; i < n; ++i) au[i] += 0.5 * u[i];
      y.m.apply_add(u.data(), au.data(), n, inv);
    }
    double c = half_eps / k;
    for (int i = 0; i < n; ++i) u[i] = v[i] + c * au[i];
  }
  std::copy(u.begin(), u.end(), out);
}

Embedding next_iterate(const std::vector<NormalizedFeedback>& ys, const MmwConfig& cfg,
                       int t) {
  // Fresh sketch per iteration; entries are addressed, so row generation
  // order is immaterial to the draw values.
  std::uint64_t sketch_seed = Rng(cfg.seed).substream(0x5048u).substream(
      static_cast<std::uint64_t>(t)).next_u64();
  GaussianSketch phi(cfg.d, sketch_seed);

  Embedding w;
  w.d = cfg.d;
  w.n = cfg.n;
  w.trace_scale = cfg.r;
  std::size_t total = static_cast<std::size_t>(cfg.d) * cfg.n;
  w.vecs.assign(total, 0.0);
  for (int i = 0; i < cfg.n; ++i)
    for (int rho = 0; rho < cfg.d; ++rho)
      w.vecs[static_cast<std::size_t>(i) * cfg.d + rho] =
          phi.entry(rho, static_cast<std::uint64_t>(i));

  // Horner on the whole block: u_p = Phi^T; u_{k-1} = Phi^T + A u_k / k
  // with A = (eps/2) * sum_t Y_t, all d lanes advanced per pass.
  std::vector<double> u(w.vecs), au(total);
  double half_eps = 0.5 * cfg.epsilon;
  for (int k = cfg.p; k >= 1; --k) {
    std::fill(au.begin(), au.end(), 0.0);
    for (const auto& y : ys) {
      double inv = 1.0 / (2.0 * y.zeta);
      for (std::size_t idx = 0; idx < total; ++idx) au[idx] += 0.5 * u[idx];
      y.m.apply_add_block(u.data(), au.data(), cfg.n, cfg.d, inv);
    }
    double c = half_eps / k;
    for (std::size_t idx = 0; idx < total; ++idx) u[idx] = w.vecs[idx] + c * au[idx];
  }
  w.vecs = std::move(u);

  double frob2 = 0;
  for (double x : w.vecs) frob2 += x * x;
  if (!(std::isfinite(frob2)) || frob2 <= 1e-300) {
    throw NumericalError("degenerate iterate normalization");
  }
  double scale = std::sqrt(cfg.r / frob2);
  for (auto& x : w.vecs) x *= scale;
  return w;
}

std::vector<DenseSym> dense_mmw_iterates(const std::vector<DenseSym>& ys, double epsilon) {
  BALCUT_REQUIRE(!ys.empty(), "need at least one matrix");
  int n = ys[0].n;
  std::vector<DenseSym> xs;
  xs.reserve(ys.size());
  DenseSym acc = DenseSym::zero(n);
  for (std::size_t t = 0; t < ys.size(); ++t) {
    DenseSym e = dense_expm(dense_scale(acc, epsilon));
    double tr = dense_trace(e);
    xs.push_back(dense_scale(e, 1.0 / tr));
    acc = dense_add(acc, ys[t]);
  }
  return xs;
}

bool eigenvalue_regret_check(const std::vector<DenseSym>& ys,
                             const std::vector<DenseSym>& xs, double epsilon,
                             double tol) {
  BALCUT_REQUIRE(ys.size() == xs.size() && !ys.empty(), "length mismatch");
  int n = ys[0].n;
  DenseSym sum = DenseSym::zero(n);
  double gain = 0;
  for (std::size_t t = 0; t < ys.size(); ++t) {
    sum = dense_add(sum, ys[t]);
    gain += dense_inner(ys[t], xs[t]);
  }
  double lhs = dense_lambda_max(sum);
  double rhs = (1.0 + epsilon) * gain + std::log(static_cast<double>(n)) / epsilon;
  return lhs < rhs + tol;
}

}  // namespace balcut
