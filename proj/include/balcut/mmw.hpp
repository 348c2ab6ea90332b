#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "balcut/common.hpp"
#include "balcut/embedding.hpp"
#include "balcut/lapterm.hpp"
#include "balcut/refcheck.hpp"

namespace balcut {

// Symmetric matrix emitted by an oracle No-verdict, as a weighted term sum.
// dual_value is the certified lower bound on <M, X'> over every near-feasible
// X' (objective <= (1+gamma)*alpha); width_bound is a declared upper bound on
// the spectral norm, verified against power iteration in tests.
struct FeedbackMatrix {
  std::vector<std::pair<LapTerm, double>> terms;
  double dual_value = 0;
  double width_bound = 0;
  std::string origin;

  void apply_add(const double* x, double* y, int n, double w = 1.0) const {
    for (const auto& [t, tw] : terms) lapterm_apply_add(t, w * tw, x, y, n);
  }

  // Vertex-major block apply over d lanes per vertex; one pass over the terms.
  void apply_add_block(const double* x, double* y, int n, int d, double w = 1.0) const {
    for (const auto& [t, tw] : terms) lapterm_apply_add_block(t, w * tw, x, y, n, d);
  }

  double quadform(const Embedding& emb) const {
    double acc = 0;
    for (const auto& [t, tw] : terms) acc += tw * balcut::quadform(t, emb);
    return acc;
  }

  std::size_t entry_support(int n) const {
    std::size_t s = 0;
    for (const auto& [t, tw] : terms) s += t.entry_support(n);
    return s;
  }
};

// Y = (M + zeta*Id) / (2*zeta); a contraction 0 <= Y <= Id when ||M|| <= zeta.
struct NormalizedFeedback {
  FeedbackMatrix m;
  double zeta = 1;

  void matvec(const double* x, double* y, int n) const {
    double inv = 1.0 / (2.0 * zeta);
    for (int i = 0; i < n; ++i) y[i] = 0.5 * x[i];
    m.apply_add(x, y, n, inv);
  }
};

NormalizedFeedback normalize_feedback(FeedbackMatrix m, double zeta);

struct MmwConfig {
  int n = 0;         // iterate dimension
  double r = 0;      // trace target of X
  int d = 16;        // sketch dimension
  double epsilon = 0.8;
  int T = 12;
  int p = 16;        // Taylor degree
  double gamma = 0.25;
  double alpha = 0;  // problem scale, used by coupling validation
  double zeta = 0;   // width floor for per-iteration normalization
  bool relax_couplings = false;
  std::uint64_t seed = 0;

  // Enforces the update/width/degree couplings unless relax_couplings:
  //   epsilon <= gamma*alpha / (2*zeta*r), T >= 2*ln(n)/epsilon^2,
  //   p >= 10*ln(n)/epsilon.
  void validate() const;
};

// u = sum_{i<=p} A^i/i! v, where A x = (epsilon/2) * sum_t Y_t x.
void taylor_exp_apply(const std::vector<NormalizedFeedback>& ys, double epsilon, int p,
                      const double* v, double* out, int n);

// Fresh-sketch iterate: rows of Phi (N(0,1/d) entries, new sketch each call)
// pushed through the Taylor polynomial, Frobenius-normalized to trace r.
// Throws NumericalError on degenerate normalization.
Embedding next_iterate(const std::vector<NormalizedFeedback>& ys, const MmwConfig& cfg,
                       int t);

template <class Payload>
struct OracleVerdict {
  std::optional<Payload> yes;
  std::optional<FeedbackMatrix> feedback;

  static OracleVerdict accept(Payload p) {
    OracleVerdict v;
    v.yes = std::move(p);
    return v;
  }
  static OracleVerdict reject(FeedbackMatrix m) {
    OracleVerdict v;
    v.feedback = std::move(m);
    return v;
  }
};

struct MmwIterLog {
  int t = 0;
  bool yes = false;
  double dual_value = 0;
  double margin = 0;  // <M, X_cand> estimate from the sketched iterate
  double width = 0;
  std::int64_t feedback_terms = 0;
  double wallclock_ms = 0;
  std::string origin;
};

template <class Payload>
struct MmwOutcome {
  std::optional<Payload> yes;
  int iterations = 0;
  bool exhausted = false;
  std::vector<MmwIterLog> log;
  Embedding last_iterate;
};

// Runs the primal-dual loop: iterate -> oracle -> feedback, until a Yes or
// exhaustion after T rounds. The oracle is any callable
// (const Embedding&, int t) -> OracleVerdict<Payload>.
template <class Payload, class Oracle>
MmwOutcome<Payload> mmw_solve(Oracle&& oracle, const MmwConfig& cfg) {
  cfg.validate();
  MmwOutcome<Payload> out;
  std::vector<NormalizedFeedback> ys;
  ys.reserve(cfg.T);
  for (int t = 1; t <= cfg.T; ++t) {
    auto t0 = std::chrono::steady_clock::now();
    Embedding w = next_iterate(ys, cfg, t);
    OracleVerdict<Payload> v = oracle(w, t);
    MmwIterLog entry;
    entry.t = t;
    out.iterations = t;
    if (v.yes) {
      entry.yes = true;
      entry.wallclock_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      out.log.push_back(entry);
      out.yes = std::move(v.yes);
      out.last_iterate = std::move(w);
      return out;
    }
    BALCUT_ASSERT(v.feedback.has_value(), "oracle returned neither verdict");
    FeedbackMatrix fb = std::move(*v.feedback);
    BALCUT_ASSERT(std::isfinite(fb.width_bound) && fb.width_bound >= 0,
                  "feedback width must be finite");
    entry.dual_value = fb.dual_value;
    entry.margin = fb.quadform(w);
    entry.width = fb.width_bound;
    entry.feedback_terms = static_cast<std::int64_t>(fb.terms.size());
    entry.origin = fb.origin;
    entry.wallclock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    out.log.push_back(entry);
    double zeta_t = std::max(fb.width_bound, cfg.zeta);
    BALCUT_ASSERT(zeta_t > 0, "normalization scale must be positive");
    ys.push_back(normalize_feedback(std::move(fb), zeta_t));
    out.last_iterate = std::move(w);
  }
  out.exhausted = true;
  return out;
}

// Dense, test-only regret audit: X_t = exp(eps * sum_{t'<t} Y_t') normalized
// to unit trace; checks lambda_max(sum Y) < (1+eps) * sum <Y_t, X_t> + ln(n)/eps.
std::vector<DenseSym> dense_mmw_iterates(const std::vector<DenseSym>& ys, double epsilon);
bool eigenvalue_regret_check(const std::vector<DenseSym>& ys,
                             const std::vector<DenseSym>& xs, double epsilon,
                             double tol = 1e-9);

}  // namespace balcut
