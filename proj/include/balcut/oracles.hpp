#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "balcut/embedding.hpp"
#include "balcut/graph.hpp"
#include "balcut/log.hpp"
#include "balcut/maxflow.hpp"
#include "balcut/mmw.hpp"
#include "balcut/rng.hpp"

namespace balcut {

// Knobs shared by the oracle stack. Negative values mean "derive the default
// from the problem size"; resolved values are logged. n_ref is the vertex
// count of the ORIGINAL graph (heaviness and the accept bar are measured
// against it), while each call works on the current, possibly shrunken graph.
struct OracleParams {
  double a = 0.4;
  double alpha = 1;
  double delta = 1.0 / 200;
  double kappa = -1;  // <0: sqrt(ln n_ref)
  double ell = 1.0;   // current vertices / n_ref
  int n_ref = 0;
  double gamma = 0.25;
  std::uint64_t seed = 0;

  int R = -1;            // repetitions; <0: min(8, ceil(ln^2 n'))
  int flow_reps = -1;    // direction retries in flow_or_cut; <0: use R
  int removal_reps = -1; // carving retries in heavy_oracle; <0: use R
  double sigma = -1;   // projection gap; <0: a/10
  double d_cap = -1;   // flow terminal capacity; <0: C_dcap*alpha*ln(n')/n'
  double C_dcap = 2;
  double C_audit = 32;

  double C_pair = 200;
  double C_star = 16;
  double C_hat = 8;
  double C_removal = 8;
  double rho = 2;             // heavy ball: sqdist <= rho*delta
  double heavy_factor = 10;   // center needs >= heavy_factor*delta^2*n_ref points
  double contact_coeff = 200; // contact-graph edge length cap: sqdist <= coeff*delta
  double triangle_factor = 10;
  int triple_cap_per_vertex = 8;
  int max_carve_rounds = 32;

  double cut_threshold = 4;
  double flatness_divisor = -1;  // <0: ln^2 n', clamped to >= 16/a
  double balance_coeff = 2;      // ordered spread threshold = coeff*a*n'^2
  double demand_threshold = 2;   // demand mass >= this*alpha emits feedback
  double obj_gate_factor = 1.1;  // self-demand gate at (1+2g)*factor*alpha
  double accept_balance_frac = -1;  // <0: a/10, of current n'
  double set_size_frac = 0.25;      // P_u floor = ceil(frac*a*n')
  double cond1_cap_override = -1;   // tests only

  void validate() const;
};

OracleParams default_oracle_params(const Graph& g, double a, double alpha,
                                   std::uint64_t seed);

// Resolved defaults.
double kappa_eff(const OracleParams& p);
double sigma_eff(const OracleParams& p);
double d_cap_eff(const OracleParams& p, int n_cur);
int reps_eff(const OracleParams& p, int n_cur);
double flatness_divisor_eff(const OracleParams& p);
// cut_threshold * alpha * (1 + delta*kappa*sqrt(ln n_ref))
double cut_accept_bar(const OracleParams& p);
// Width floor handed to the engine.
double zeta_floor(const OracleParams& p, int n_cur);

struct HeavyMap {
  std::vector<int> centers;  // heavy sample points, ascending
  std::vector<int> f;        // per current vertex: center id or -1
  std::vector<int> v_star;   // vertices with f != -1, ascending
};

struct CarvedSet {
  int center = -1;
  std::vector<int> members;
};

struct RemovalOutcome {
  std::vector<std::pair<int, int>> e_star;  // long edges (sqdist >= delta)
  Partition tripartition;                   // 0 = P1, 1 = P2, 2 = remainder
  std::vector<CarvedSet> carved;
  std::vector<double> r_draws;
  std::vector<std::array<int, 3>> triples;  // (outside, inside, center)
  int rounds = 0;
  bool round_cap_hit = false;
};

enum class FlowCutKind { CutAccepted, Feedback, FlowCertified, Degenerate };

struct FlowOrCutResult {
  FlowCutKind kind = FlowCutKind::Degenerate;
  Partition bipartition;  // over current vertices (unset when Degenerate)
  double cut_edges = -1;  // |E(P, P')| in the current graph
  std::optional<FeedbackMatrix> feedback;
  int reps_used = 0;
  std::string note;
};

enum class HeavyKind { Yes, Feedback };

struct HeavyOracleResult {
  HeavyKind kind = HeavyKind::Yes;
  RemovalOutcome outcome;
  std::optional<FeedbackMatrix> feedback;
  std::string case_label;  // "audit" | "cond1" | "case1" | "case2"
};

// Stage 1: flat-set and spread checks. nullopt = pass.
std::optional<FeedbackMatrix> flatness_balance_oracle(const Graph& g, const Embedding& w,
                                                      const OracleParams& p,
                                                      JsonlLogger* log = nullptr);

// Stage 2: random-direction projection split, terminal-capacitated flow.
FlowOrCutResult flow_or_cut(const Graph& g, const Embedding& w, const OracleParams& p,
                            JsonlLogger* log = nullptr);

// Accept-only replay of the flow scan: reports the first repetition whose
// min cut clears the accept bar and the balance floor, with no demand
// routing and no feedback construction. Used by the driver to harvest
// acceptable cuts from iterates the stacked oracle rejected upstream.
struct AcceptProbe {
  Partition bipartition;
  std::int64_t cut_edges = 0;
  int min_side = 0;
};
std::optional<AcceptProbe> flow_accept_probe(const Graph& g, const Embedding& w,
                                             const OracleParams& p);

// Heavy-vertex detection on the full current vertex set (round-0 stream).
HeavyMap detect_heavy(const Embedding& w, const OracleParams& p);
// Detection restricted to `subset` with an explicit sampling stream.
HeavyMap detect_heavy_subset(const Embedding& w, const std::vector<int>& subset,
                             const OracleParams& p, Rng stream);

// Stage 3 carving. trial_nonce perturbs only the radius draws, so carving
// probability statements can be sampled with everything else held fixed.
RemovalOutcome heavy_removal(const Graph& g, const Embedding& w, const OracleParams& p,
                             std::uint64_t trial_nonce = 0);

HeavyOracleResult heavy_oracle(const Graph& g, const Embedding& w, const OracleParams& p,
                               JsonlLogger* log = nullptr);

// Combined verdict consumed by the cut driver.
struct StackYes {
  bool cut_accepted = false;
  Partition bipartition;
  double cut_edges = -1;
  RemovalOutcome removal;
  std::string kind;  // "cut_accepted" | "flow_certified" | "degenerate"
};
using StackVerdict = OracleVerdict<StackYes>;

StackVerdict stacked_oracle(const Graph& g, const Embedding& w, const OracleParams& p,
                            JsonlLogger* log = nullptr);

// Feedback builders (exposed for the separation contract tests).
FeedbackMatrix build_flatness_feedback(const std::vector<int>& flat, int n_cur,
                                       const OracleParams& p);
FeedbackMatrix build_balance_feedback(const std::vector<int>& nonflat, int n_cur,
                                      const OracleParams& p);
// demands: ((i, j), weight); returns nullopt when the margin check fails.
std::optional<FeedbackMatrix> build_demand_feedback(
    const std::vector<std::pair<std::pair<int, int>, double>>& demands,
    const Embedding& w, int n_cur, const OracleParams& p, const std::string& origin);
std::optional<FeedbackMatrix> build_triangle_feedback(const RemovalOutcome& out,
                                                      const Embedding& w, int n_cur,
                                                      const OracleParams& p);

}  // namespace balcut
