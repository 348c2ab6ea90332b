#include "balcut/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {

namespace {

// Substream tags for the oracle stack.
constexpr std::uint64_t kTagDirections = 0x4449;
constexpr std::uint64_t kTagAudit = 0x4155;
constexpr std::uint64_t kTagDetect = 0x4845;
constexpr std::uint64_t kTagRadius = 0x5241;

// Diagonal excess targeted by the flatness term; margins below are computed
// against tall entries (> 2) versus feasible ones (= 1).
constexpr double kFlatBeta = 1.25;
// Identity shift inside the balance term, in units of a*n'.
constexpr double kBalanceShift = 1.5;
// Slack applied when scaling the objective-routed demand weight.
constexpr double kMarginPad = 1.02;

double ln_of(int n) { return std::log(static_cast<double>(std::max(n, 2))); }

using DemandList = std::vector<std::pair<std::pair<int, int>, double>>;

DemandList aggregate_paths(const std::vector<FlowPath>& paths) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& p : paths) {
    if (p.src == p.dst || p.amount <= 0) continue;
    acc[{std::min(p.src, p.dst), std::max(p.src, p.dst)}] += p.amount;
  }
  return {acc.begin(), acc.end()};
}

double demand_mass(const DemandList& demands, const Embedding& w) {
  double mass = 0;
  for (const auto& [pr, f] : demands) mass += f * w.sqdist(pr.first, pr.second);
  return mass;
}

// Median split on the first sketch coordinate; used as a last-resort
// bipartition when the projection scan never produces terminal sets.
Partition projection_median_split(const Embedding& w) {
  int n = w.n;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int x, int y) { return w.col(x)[0] < w.col(y)[0]; });
  Partition p;
  p.side.assign(n, 1);
  for (int i = 0; i < n / 2; ++i) p.side[idx[i]] = 0;
  return p;
}

struct DsuCompact {
  std::vector<int> parent;
  explicit DsuCompact(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (x > y) std::swap(x, y);
    parent[y] = x;  // smaller root wins, keeps component reps deterministic
  }
};

}  // namespace

void OracleParams::validate() const {
  BALCUT_REQUIRE(n_ref >= 1, "n_ref must be positive");
  BALCUT_REQUIRE(a > 0 && a <= 0.5, "balance parameter must lie in (0, 1/2]");
  BALCUT_REQUIRE(alpha > 0 && std::isfinite(alpha), "alpha must be positive");
  BALCUT_REQUIRE(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  BALCUT_REQUIRE(ell > 0, "ell must be positive");
  BALCUT_REQUIRE(gamma > 0 && gamma <= 0.5, "gamma must lie in (0, 1/2]");
  BALCUT_REQUIRE(flow_reps != 0 && removal_reps != 0, "repetition counts must be nonzero");
  BALCUT_REQUIRE(demand_threshold >= 1 + 2 * gamma,
                 "demand threshold below the feedback margin requirement");
  BALCUT_REQUIRE(obj_gate_factor > 1, "objective gate factor must exceed 1");
  BALCUT_REQUIRE(cut_threshold > 0, "cut threshold must be positive");
  BALCUT_REQUIRE(rho >= 1, "heavy ball radius factor must be >= 1");
  BALCUT_REQUIRE(heavy_factor > 0, "heavy count factor must be positive");
  BALCUT_REQUIRE(contact_coeff > 0, "contact length cap must be positive");
  BALCUT_REQUIRE(triangle_factor > 0, "triangle slack factor must be positive");
  BALCUT_REQUIRE(triple_cap_per_vertex >= 1, "triple multiplicity cap must be >= 1");
  BALCUT_REQUIRE(max_carve_rounds >= 1, "carve round cap must be >= 1");
  BALCUT_REQUIRE(set_size_frac > 0 && set_size_frac <= 0.5,
                 "terminal set fraction must lie in (0, 1/2]");
  BALCUT_REQUIRE(C_dcap > 0 && C_audit > 0 && C_pair > 0 && C_star > 0 && C_hat > 0 &&
                     C_removal > 0,
                 "capacity constants must be positive");
  BALCUT_REQUIRE(balance_coeff > 0, "balance coefficient must be positive");
}

OracleParams default_oracle_params(const Graph& g, double a, double alpha,
                                   std::uint64_t seed) {
  OracleParams p;
  p.a = a;
  p.alpha = alpha;
  p.n_ref = g.n;
  p.ell = 1.0;
  p.seed = seed;
  p.validate();
  return p;
}

double kappa_eff(const OracleParams& p) {
  return p.kappa >= 0 ? p.kappa : std::sqrt(ln_of(p.n_ref));
}

double sigma_eff(const OracleParams& p) { return p.sigma >= 0 ? p.sigma : p.a / 10.0; }

double d_cap_eff(const OracleParams& p, int n_cur) {
  if (p.d_cap >= 0) return p.d_cap;
  return p.C_dcap * p.alpha * ln_of(n_cur) / std::max(n_cur, 1);
}

int reps_eff(const OracleParams& p, int n_cur) {
  if (p.R >= 0) return std::max(p.R, 1);
  double l = ln_of(n_cur);
  return std::max(1, std::min(8, static_cast<int>(std::ceil(l * l))));
}

double flatness_divisor_eff(const OracleParams& p) {
  double base = p.flatness_divisor;
  if (base < 0) {
    double l = ln_of(p.n_ref);
    base = l * l;
  }
  // The balance certificate needs the tall set to stay below a*n'/16.
  return std::max(base, 16.0 / p.a);
}

double cut_accept_bar(const OracleParams& p) {
  return p.cut_threshold * p.alpha * (1 + p.delta * kappa_eff(p) * std::sqrt(ln_of(p.n_ref)));
}

double zeta_floor(const OracleParams& p, int n_cur) {
  return (1 + p.gamma) * p.alpha / std::max(n_cur, 1);
}

FeedbackMatrix build_flatness_feedback(const std::vector<int>& tall, int n_cur,
                                       const OracleParams& p) {
  BALCUT_ASSERT(!tall.empty(), "flatness feedback needs a nonempty tall set");
  double c = p.gamma * p.alpha / (2.0 - kFlatBeta);
  double id_coef = c * kFlatBeta / n_cur;
  double proj_coef = c / static_cast<double>(tall.size());

  FeedbackMatrix fb;
  fb.origin = "flatness";
  fb.terms.push_back({LapTerm::identity(1.0), id_coef});
  std::vector<double> diag(n_cur, 0.0);
  for (int v : tall) diag[v] = 1.0;
  fb.terms.push_back({LapTerm::diagonal(std::move(diag)), -proj_coef});
  // Both terms are diagonal, so the spectral norm is exact.
  fb.width_bound = std::max(std::abs(id_coef), std::abs(id_coef - proj_coef));
  fb.dual_value = c * (kFlatBeta - 1.0);
  return fb;
}

FeedbackMatrix build_balance_feedback(const std::vector<int>& spread_set, int n_cur,
                                      const OracleParams& p) {
  double nn = static_cast<double>(n_cur);
  double s = 2.0 * p.gamma * p.alpha / (p.a * nn * nn);
  double shift = kBalanceShift * p.a * nn;

  FeedbackMatrix fb;
  fb.origin = "balance";
  fb.terms.push_back({LapTerm::complete(spread_set), s});
  fb.terms.push_back({LapTerm::identity(1.0), -s * shift});
  double sz = static_cast<double>(spread_set.size());
  fb.width_bound = s * std::max(shift, std::abs(sz - shift));
  fb.dual_value = 0.75 * p.gamma * p.alpha;
  return fb;
}

std::optional<FeedbackMatrix> build_demand_feedback(const DemandList& demands,
                                                    const Embedding& w, int n_cur,
                                                    const OracleParams& p,
                                                    const std::string& origin) {
  if (demands.empty()) return std::nullopt;
  double mass = demand_mass(demands, w);
  double need = (1 + 2 * p.gamma) * p.alpha;
  if (mass < need) return std::nullopt;  // margin would not reach -gamma*alpha

  FeedbackMatrix fb;
  fb.origin = origin;
  double id_coef = (1 + p.gamma) * p.alpha / n_cur;
  fb.terms.push_back({LapTerm::identity(1.0), id_coef});
  std::vector<double> wdeg(n_cur, 0.0);
  for (const auto& [pr, f] : demands) {
    fb.terms.push_back({LapTerm::edge(pr.first, pr.second), -f});
    wdeg[pr.first] += f;
    wdeg[pr.second] += f;
  }
  double maxdeg = *std::max_element(wdeg.begin(), wdeg.end());
  fb.width_bound = id_coef + 2.0 * maxdeg;
  // Routed demands never exceed the objective of a near-feasible solution,
  // so the identity part certifies nonnegativity; 0 is the safe bound.
  fb.dual_value = 0;
  return fb;
}

std::optional<FeedbackMatrix> build_triangle_feedback(const RemovalOutcome& out,
                                                      const Embedding& w, int n_cur,
                                                      const OracleParams& p) {
  if (out.triples.empty()) return std::nullopt;
  double f = p.C_star * p.alpha / n_cur;
  double id_coef = (1 + p.gamma) * p.alpha / n_cur;

  double total = (1 + p.gamma) * p.alpha;
  std::vector<int> mult(n_cur, 0);
  for (const auto& tr : out.triples) {
    total += f * triangle_violation(w, tr[0], tr[1], tr[2]);
    ++mult[tr[0]];
    ++mult[tr[1]];
    ++mult[tr[2]];
  }
  if (total > -p.gamma * p.alpha) return std::nullopt;

  FeedbackMatrix fb;
  fb.origin = "triangle";
  fb.terms.push_back({LapTerm::identity(1.0), id_coef});
  for (const auto& tr : out.triples) {
    fb.terms.push_back({LapTerm::path_triple(tr[0], tr[1], tr[2]), f});
  }
  int max_mult = *std::max_element(mult.begin(), mult.end());
  fb.width_bound = id_coef + 4.0 * f * max_mult;
  fb.dual_value = (1 + p.gamma) * p.alpha;
  return fb;
}

std::optional<FeedbackMatrix> flatness_balance_oracle(const Graph& g, const Embedding& w,
                                                      const OracleParams& p,
                                                      JsonlLogger* log) {
  BALCUT_REQUIRE(g.n == w.n, "graph and embedding disagree on vertex count");
  int n = g.n;
  std::vector<int> tall = tall_set(w, 2.0);
  double div = flatness_divisor_eff(p);
  if (static_cast<double>(tall.size()) > n / div) {
    if (log && log->enabled()) {
      log->line({{"event", "oracle_no"},
                 {"stage", "flatness"},
                 {"tall", tall.size()},
                 {"cap", n / div}});
    }
    return build_flatness_feedback(tall, n, p);
  }

  std::vector<int> flat;
  flat.reserve(n - tall.size());
  std::size_t ti = 0;
  for (int v = 0; v < n; ++v) {
    if (ti < tall.size() && tall[ti] == v) {
      ++ti;
      continue;
    }
    flat.push_back(v);
  }
  double spr = spread(w, flat);
  double threshold = p.balance_coeff * p.a * static_cast<double>(n) * n;
  if (spr < threshold) {
    if (log && log->enabled()) {
      log->line({{"event", "oracle_no"},
                 {"stage", "balance"},
                 {"spread", spr},
                 {"threshold", threshold}});
    }
    return build_balance_feedback(flat, n, p);
  }
  return std::nullopt;
}


namespace {

// One repetition of the projection scan: Gaussian direction, median window,
// extremal fallback. Returns false when the gap test fails.
bool scan_rep_terminals(const Embedding& w, const OracleParams& p,
                        const std::vector<int>& scan, int floor_sz, double sigma, int rep,
                        std::vector<int>& lo, std::vector<int>& hi) {
  Rng dir_stream = Rng(p.seed).substream(kTagDirections).substream(static_cast<std::uint64_t>(rep));
  std::vector<double> u(w.d);
  for (double& x : u) x = dir_stream.next_gaussian();

  std::vector<double> proj(scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double* v = w.col(scan[i]);
    double acc = 0;
    for (int r = 0; r < w.d; ++r) acc += v[r] * u[r];
    proj[i] = acc;
  }

  std::vector<double> tmp = proj;
  std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
  double med = tmp[tmp.size() / 2];

  lo.clear();
  hi.clear();
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (proj[i] <= med - sigma / 2) lo.push_back(scan[i]);
    else if (proj[i] >= med + sigma / 2) hi.push_back(scan[i]);
  }
  if (static_cast<int>(lo.size()) < floor_sz || static_cast<int>(hi.size()) < floor_sz) {
    // Median window too crowded; fall back to the extremes if they are
    // separated by at least sigma.
    std::vector<int> order(scan.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return proj[x] < proj[y]; });
    double gap = proj[order[order.size() - floor_sz]] - proj[order[floor_sz - 1]];
    if (gap < sigma) return false;
    lo.clear();
    hi.clear();
    for (int i = 0; i < floor_sz; ++i) lo.push_back(scan[order[i]]);
    for (std::size_t i = order.size() - floor_sz; i < order.size(); ++i)
      hi.push_back(scan[order[i]]);
    std::sort(lo.begin(), lo.end());
    std::sort(hi.begin(), hi.end());
  }
  return true;
}

}  // namespace

FlowOrCutResult flow_or_cut(const Graph& g, const Embedding& w, const OracleParams& p,
                            JsonlLogger* log) {
  BALCUT_REQUIRE(g.n == w.n, "graph and embedding disagree on vertex count");
  int n = g.n;
  FlowOrCutResult res;
  res.bipartition = projection_median_split(w);

  std::vector<int> tall = tall_set(w, 2.0);
  std::vector<int> scan;
  scan.reserve(n - tall.size());
  {
    std::size_t ti = 0;
    for (int v = 0; v < n; ++v) {
      if (ti < tall.size() && tall[ti] == v) {
        ++ti;
        continue;
      }
      scan.push_back(v);
    }
  }

  int floor_sz = static_cast<int>(std::ceil(p.set_size_frac * p.a * n));
  floor_sz = std::max(floor_sz, 1);
  double sigma = sigma_eff(p);
  double bar = cut_accept_bar(p);
  int min_side_floor = static_cast<int>(
      std::ceil((p.accept_balance_frac >= 0 ? p.accept_balance_frac : p.a / 10.0) * n));
  double dcap = d_cap_eff(p, n);
  double obj = objective(g, w);

  if (static_cast<int>(scan.size()) < 2 * floor_sz) {
    res.kind = FlowCutKind::Degenerate;
    res.note = "flat set too small for terminal sets";
    return res;
  }

  int nreps = p.flow_reps >= 0 ? p.flow_reps : reps_eff(p, n);
  for (int rep = 0; rep < nreps; ++rep) {
    ++res.reps_used;
    std::vector<int> lo, hi;
    if (!scan_rep_terminals(w, p, scan, floor_sz, sigma, rep, lo, hi)) continue;
    FlowResult fr = max_flow_dregular(g, lo, hi, dcap);
    std::int64_t cut_e = cut_value(g, fr.mincut);
    int min_side = fr.mincut.min_side();
    if (log && log->enabled()) {
      log->line({{"event", "flow_rep"},
                 {"rep", rep},
                 {"flow", fr.value},
                 {"cut_edges", cut_e},
                 {"min_side", min_side}});
    }
    if (cut_e <= bar && min_side >= min_side_floor) {
      res.kind = FlowCutKind::CutAccepted;
      res.bipartition = fr.mincut;
      res.cut_edges = static_cast<double>(cut_e);
      res.note = "cut within the accept bar";
      return res;
    }

    DemandList demands = aggregate_paths(flow_path_decompose(g, lo, hi, fr));
    double mass = demand_mass(demands, w);
    if (mass >= p.demand_threshold * p.alpha) {
      auto fb = build_demand_feedback(demands, w, n, p, "flow_demand");
      BALCUT_ASSERT(fb.has_value(), "demand mass above threshold must yield feedback");
      res.kind = FlowCutKind::Feedback;
      res.feedback = std::move(fb);
      res.note = "routed demand mass certifies a violated objective";
      return res;
    }

    res.kind = FlowCutKind::FlowCertified;
    res.bipartition = fr.mincut;
    res.cut_edges = static_cast<double>(cut_e);
    res.note = "flow stayed small without an acceptable cut";
    return res;
  }

  // Every repetition failed to produce separated terminal sets. If the
  // objective is still far above target, route one unit of demand along every
  // edge so the solver keeps moving; otherwise report the degenerate geometry.
  double gate = (1 + 2 * p.gamma) * p.obj_gate_factor * p.alpha;
  if (obj >= gate) {
    double theta = std::min(1.0, (1 + 2 * p.gamma) * kMarginPad * p.alpha / obj);
    DemandList self;
    self.reserve(g.edges.size());
    for (const auto& e : g.edges) self.push_back({{e.first, e.second}, theta});
    auto fb = build_demand_feedback(self, w, n, p, "objective_demand");
    if (fb) {
      res.kind = FlowCutKind::Feedback;
      res.feedback = std::move(fb);
      res.note = "objective gate exceeded, demands routed along the edges";
      return res;
    }
  }

  res.kind = FlowCutKind::Degenerate;
  res.note = "projection scan produced no separated terminal sets";
  return res;
}

std::optional<AcceptProbe> flow_accept_probe(const Graph& g, const Embedding& w,
                                             const OracleParams& p) {
  BALCUT_REQUIRE(g.n == w.n, "graph and embedding disagree on vertex count");
  int n = g.n;
  std::vector<int> tall = tall_set(w, 2.0);
  std::vector<int> scan;
  scan.reserve(n - tall.size());
  std::size_t ti = 0;
  for (int v = 0; v < n; ++v) {
    if (ti < tall.size() && tall[ti] == v) {
      ++ti;
      continue;
    }
    scan.push_back(v);
  }

  int floor_sz = std::max(1, static_cast<int>(std::ceil(p.set_size_frac * p.a * n)));
  if (static_cast<int>(scan.size()) < 2 * floor_sz) return std::nullopt;
  double sigma = sigma_eff(p);
  double bar = cut_accept_bar(p);
  int min_side_floor = static_cast<int>(
      std::ceil((p.accept_balance_frac >= 0 ? p.accept_balance_frac : p.a / 10.0) * n));
  double dcap = d_cap_eff(p, n);

  int nreps = p.flow_reps >= 0 ? p.flow_reps : reps_eff(p, n);
  for (int rep = 0; rep < nreps; ++rep) {
    std::vector<int> lo, hi;
    if (!scan_rep_terminals(w, p, scan, floor_sz, sigma, rep, lo, hi)) continue;
    FlowResult fr = max_flow_dregular(g, lo, hi, dcap);
    std::int64_t cut_e = cut_value(g, fr.mincut);
    int min_side = fr.mincut.min_side();
    if (cut_e <= bar && min_side >= min_side_floor) {
      AcceptProbe out;
      out.bipartition = fr.mincut;
      out.cut_edges = cut_e;
      out.min_side = min_side;
      return out;
    }
  }
  return std::nullopt;
}

HeavyMap detect_heavy_subset(const Embedding& w, const std::vector<int>& subset,
                             const OracleParams& p, Rng stream) {
  HeavyMap hm;
  hm.f.assign(w.n, -1);
  if (subset.empty()) return hm;
  int n_sub = static_cast<int>(subset.size());

  double target_d = 100.0 * ln_of(p.n_ref) / (p.delta * p.delta);
  std::vector<int> candidates;
  if (target_d >= static_cast<double>(n_sub)) {
    candidates = subset;
  } else {
    auto target = static_cast<std::int64_t>(std::ceil(target_d));
    std::vector<char> seen(n_sub, 0);
    for (std::int64_t i = 0; i < target; ++i) {
      seen[stream.next_below(static_cast<std::uint64_t>(n_sub))] = 1;
    }
    for (int i = 0; i < n_sub; ++i)
      if (seen[i]) candidates.push_back(subset[i]);
  }

  double radius = p.rho * p.delta;
  double need = p.heavy_factor * p.delta * p.delta * p.n_ref;
  for (int c : candidates) {
    double cnt = 0;
    for (int x : subset) {
      if (w.sqdist(c, x) <= radius) {
        if (++cnt >= need) break;
      }
    }
    if (cnt >= need) hm.centers.push_back(c);
  }

  if (!hm.centers.empty()) {
    for (int x : subset) {
      int best = -1;
      double best_d = radius;
      for (int c : hm.centers) {
        double dxc = w.sqdist(x, c);
        if (dxc < best_d || (dxc == best_d && (best == -1 || c < best))) {
          best_d = dxc;
          best = c;
          if (dxc == 0) break;  // centers ascend, a zero hit cannot be beaten
        }
      }
      if (best >= 0) {
        hm.f[x] = best;
        hm.v_star.push_back(x);
      }
    }
  }
  return hm;
}

HeavyMap detect_heavy(const Embedding& w, const OracleParams& p) {
  std::vector<int> all(w.n);
  std::iota(all.begin(), all.end(), 0);
  return detect_heavy_subset(w, all, p, Rng(p.seed).substream(kTagDetect).substream(0));
}

RemovalOutcome heavy_removal(const Graph& g, const Embedding& w, const OracleParams& p,
                             std::uint64_t trial_nonce) {
  BALCUT_REQUIRE(g.n == w.n, "graph and embedding disagree on vertex count");
  int n = g.n;
  RemovalOutcome out;

  for (const auto& e : g.edges) {
    if (w.sqdist(e.first, e.second) >= p.delta) out.e_star.push_back(e);
  }
  Graph h = g.without_edges(out.e_star);

  Rng detect_root = Rng(p.seed).substream(kTagDetect);
  Rng radius_root = Rng(p.seed).substream(kTagRadius).substream(trial_nonce);

  std::vector<char> alive(n, 1);
  int alive_cnt = n;
  std::vector<std::array<int, 3>> raw_triples;

  auto carve_set = [&](const std::vector<int>& members, int center) {
    for (int x : members) {
      BALCUT_ASSERT(alive[x], "carved vertex must still be alive");
      alive[x] = 0;
    }
    alive_cnt -= static_cast<int>(members.size());
    // Edges of the short graph leaving the freshly carved set become
    // triangle-candidate triples (outside, inside, center).
    for (int x : members) {
      for (int y : h.adj[x]) {
        if (!alive[y]) continue;
        if (w.sqdist(y, center) >=
            w.sqdist(x, center) + p.triangle_factor * w.sqdist(y, x)) {
          raw_triples.push_back({y, x, center});
        }
      }
    }
    out.carved.push_back({center, members});
  };

  double sep = 10.0 * p.C_pair * p.delta;
  double u_need = p.a / (p.C_pair * p.delta);

  while (alive_cnt > 0 && out.rounds < p.max_carve_rounds) {
    std::vector<int> alive_list;
    alive_list.reserve(alive_cnt);
    for (int v = 0; v < n; ++v)
      if (alive[v]) alive_list.push_back(v);

    HeavyMap hm = detect_heavy_subset(
        w, alive_list, p, detect_root.substream(static_cast<std::uint64_t>(out.rounds)));

    std::vector<int> u_set;
    for (int v : hm.v_star) {
      bool ok = true;
      for (int u : u_set) {
        if (w.sqdist(v, u) < sep) {
          ok = false;
          break;
        }
      }
      if (ok) u_set.push_back(v);
    }

    Rng round_radius = radius_root.substream(static_cast<std::uint64_t>(out.rounds));
    if (static_cast<double>(u_set.size()) >= u_need && !u_set.empty()) {
      double r = round_radius.next_uniform(1.0, 2.0);
      out.r_draws.push_back(r);
      double ball = 2.0 * r * p.delta;
      for (int u : u_set) {
        std::vector<int> members;
        for (int x : alive_list) {
          if (alive[x] && w.sqdist(x, u) <= ball) members.push_back(x);
        }
        if (!members.empty()) carve_set(members, u);
      }
      ++out.rounds;
    } else {
      // Too few separated centers: contact stage. Components of the contact
      // graph over centers are carved together with their radius-r halos,
      // and carving ends here.
      double r = round_radius.next_uniform(1.0, 2.0);
      out.r_draws.push_back(r);
      ++out.rounds;
      if (hm.centers.empty()) break;

      std::vector<int> center_idx(n, -1);
      for (std::size_t i = 0; i < hm.centers.size(); ++i) center_idx[hm.centers[i]] = static_cast<int>(i);
      DsuCompact dsu(static_cast<int>(hm.centers.size()));
      for (const auto& e : h.edges) {
        if (!alive[e.first] || !alive[e.second]) continue;
        int fx = hm.f[e.first], fy = hm.f[e.second];
        if (fx < 0 || fy < 0 || fx == fy) continue;
        if (w.sqdist(e.first, e.second) > p.contact_coeff * p.delta) continue;
        dsu.unite(center_idx[fx], center_idx[fy]);
      }

      double ball = 2.0 * r * p.delta;
      // claim[x]: the component that takes x, with the claiming center.
      std::vector<int> claim_comp(n, -1), claim_center(n, -1);
      for (int x : alive_list) {
        int fx = hm.f[x];
        if (fx >= 0) {
          claim_comp[x] = dsu.find(center_idx[fx]);
          claim_center[x] = fx;
          continue;
        }
        for (std::size_t ci = 0; ci < hm.centers.size(); ++ci) {
          if (w.sqdist(x, hm.centers[ci]) <= ball) {
            claim_comp[x] = dsu.find(static_cast<int>(ci));
            claim_center[x] = hm.centers[ci];
            break;  // centers ascend; first hit is the deterministic owner
          }
        }
      }

      std::vector<std::vector<int>> comp_members(hm.centers.size());
      for (int x : alive_list) {
        if (claim_comp[x] >= 0) comp_members[claim_comp[x]].push_back(x);
      }
      for (std::size_t ci = 0; ci < comp_members.size(); ++ci) {
        if (comp_members[ci].empty()) continue;
        carve_set(comp_members[ci], hm.centers[ci]);
      }
      break;
    }
    if (hm.centers.empty()) break;
  }
  out.round_cap_hit = alive_cnt > 0 && out.rounds >= p.max_carve_rounds;

  // Distribute carved sets to the two removal sides, largest first, always
  // onto the lighter side; survivors keep label 2.
  std::vector<std::size_t> order(out.carved.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (out.carved[x].members.size() != out.carved[y].members.size())
      return out.carved[x].members.size() > out.carved[y].members.size();
    return out.carved[x].center < out.carved[y].center;
  });
  out.tripartition.side.assign(n, 2);
  std::int64_t w0 = 0, w1 = 0;
  for (std::size_t idx : order) {
    const auto& cs = out.carved[idx];
    int side = (w0 <= w1) ? 0 : 1;
    (side == 0 ? w0 : w1) += static_cast<std::int64_t>(cs.members.size());
    for (int x : cs.members) out.tripartition.side[x] = static_cast<std::int8_t>(side);
  }

  // Per-vertex multiplicity cap keeps the triangle feedback width bounded.
  std::vector<int> mult(n, 0);
  for (const auto& tr : raw_triples) {
    if (mult[tr[0]] >= p.triple_cap_per_vertex || mult[tr[1]] >= p.triple_cap_per_vertex ||
        mult[tr[2]] >= p.triple_cap_per_vertex)
      continue;
    ++mult[tr[0]];
    ++mult[tr[1]];
    ++mult[tr[2]];
    out.triples.push_back(tr);
  }
  return out;
}

HeavyOracleResult heavy_oracle(const Graph& g, const Embedding& w, const OracleParams& p,
                               JsonlLogger* log) {
  BALCUT_REQUIRE(g.n == w.n, "graph and embedding disagree on vertex count");
  int n = g.n;
  HeavyOracleResult res;

  std::vector<std::pair<int, int>> e_star;
  for (const auto& e : g.edges) {
    if (w.sqdist(e.first, e.second) >= p.delta) e_star.push_back(e);
  }

  // Long edges must be rare; a large long-edge set is only tolerated when
  // random balanced flows stay small, otherwise the flow itself certifies a
  // violated objective.
  double count_cap = p.C_hat * p.alpha / p.delta;
  bool audited = static_cast<double>(e_star.size()) <= count_cap;
  if (!audited) {
    Rng astream = Rng(p.seed).substream(kTagAudit);
    double d_audit = p.C_audit * p.alpha / n;
    int reps = reps_eff(p, n);
    double best_mass = -1;
    DemandList best_demands;
    int sz = std::min(static_cast<int>(std::ceil(p.a * n)), n / 2);
    sz = std::max(sz, 1);
    for (int rep = 0; rep < reps && !audited; ++rep) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      Rng rep_stream = astream.substream(static_cast<std::uint64_t>(rep));
      rep_stream.shuffle(perm);
      std::vector<int> A(perm.begin(), perm.begin() + sz);
      std::vector<int> B(perm.begin() + sz, perm.begin() + 2 * sz);
      std::sort(A.begin(), A.end());
      std::sort(B.begin(), B.end());
      FlowResult fr = max_flow_dregular(g, A, B, d_audit);
      if (fr.value <= p.C_hat * p.alpha) {
        audited = true;
        break;
      }
      DemandList demands = aggregate_paths(flow_path_decompose(g, A, B, fr));
      double mass = demand_mass(demands, w);
      if (mass > best_mass) {
        best_mass = mass;
        best_demands = std::move(demands);
      }
    }
    if (!audited) {
      if (best_mass >= p.demand_threshold * p.alpha) {
        auto fb = build_demand_feedback(best_demands, w, n, p, "audit_demand");
        BALCUT_ASSERT(fb.has_value(), "audit mass above threshold must yield feedback");
        res.kind = HeavyKind::Feedback;
        res.feedback = std::move(fb);
        res.case_label = "audit";
        return res;
      }
      if (log && log->enabled()) {
        log->line({{"event", "audit_anomaly"},
                   {"e_star", e_star.size()},
                   {"best_mass", best_mass}});
      }
    }
  }

  double cap1 = p.cond1_cap_override >= 0
                    ? p.cond1_cap_override
                    : p.C_removal * (p.alpha / p.delta) * (1 + p.ell / p.delta);
  RemovalOutcome best_out;
  std::int64_t best_cut = std::numeric_limits<std::int64_t>::max();
  int carve_reps = p.removal_reps >= 0 ? p.removal_reps : reps_eff(p, g.n);
  for (int rep = 0; rep < carve_reps; ++rep) {
    RemovalOutcome out = heavy_removal(g, w, p, static_cast<std::uint64_t>(rep));
    std::int64_t cut_e = 0;
    std::size_t star_i = 0;
    for (const auto& e : g.edges) {
      // e_star preserves edge order, so one forward scan pairs them up.
      bool is_star = star_i < e_star.size() && e_star[star_i] == e;
      if (is_star) ++star_i;
      if (!is_star && out.tripartition.side[e.first] != out.tripartition.side[e.second])
        ++cut_e;
    }
    if (log && log->enabled()) {
      log->line({{"event", "removal_rep"},
                 {"rep", rep},
                 {"short_cut_edges", cut_e},
                 {"cap", cap1},
                 {"rounds", out.rounds}});
    }
    if (static_cast<double>(cut_e) <= cap1) {
      res.kind = HeavyKind::Yes;
      res.outcome = std::move(out);
      res.case_label = "cond1";
      return res;
    }
    if (cut_e < best_cut) {
      best_cut = cut_e;
      best_out = std::move(out);
    }
  }

  // The removal kept cutting too many short edges. Either the sides support
  // large flows over short edges (routed demands), or the harvested triples
  // certify broken triangle inequalities. Neither is a diagnostic failure.
  Graph h = g.without_edges(e_star);
  double d_c = 100.0 * p.C_star * (p.alpha / (n * p.delta)) * (1 + p.ell / p.delta);
  std::vector<int> p1, p2, rest;
  for (int v = 0; v < n; ++v) {
    switch (best_out.tripartition.side[v]) {
      case 0: p1.push_back(v); break;
      case 1: p2.push_back(v); break;
      default: rest.push_back(v); break;
    }
  }
  std::vector<int> p12 = p1;
  p12.insert(p12.end(), p2.begin(), p2.end());
  std::sort(p12.begin(), p12.end());
  std::vector<int> p2rest = p2;
  p2rest.insert(p2rest.end(), rest.begin(), rest.end());
  std::sort(p2rest.begin(), p2rest.end());
  std::vector<int> p1rest = p1;
  p1rest.insert(p1rest.end(), rest.begin(), rest.end());
  std::sort(p1rest.begin(), p1rest.end());

  double best_mass = -1;
  DemandList best_demands;
  auto try_flow = [&](const std::vector<int>& src, const std::vector<int>& snk) {
    if (src.empty() || snk.empty()) return;
    FlowResult fr = max_flow_dregular(h, src, snk, d_c);
    DemandList demands = aggregate_paths(flow_path_decompose(h, src, snk, fr));
    double mass = demand_mass(demands, w);
    if (mass > best_mass) {
      best_mass = mass;
      best_demands = std::move(demands);
    }
  };
  try_flow(p12, rest);
  try_flow(p1, p2rest);
  try_flow(p2, p1rest);

  if (best_mass >= p.demand_threshold * p.alpha) {
    auto fb = build_demand_feedback(best_demands, w, n, p, "long_edge_demand");
    BALCUT_ASSERT(fb.has_value(), "side-flow mass above threshold must yield feedback");
    res.kind = HeavyKind::Feedback;
    res.feedback = std::move(fb);
    res.case_label = "case1";
    res.outcome = std::move(best_out);
    return res;
  }

  auto fb2 = build_triangle_feedback(best_out, w, n, p);
  if (fb2) {
    res.kind = HeavyKind::Feedback;
    res.feedback = std::move(fb2);
    res.case_label = "case2";
    res.outcome = std::move(best_out);
    return res;
  }

  throw DiagnosticError(
      "internal: removal cut too many short edges yet produced neither a demand "
      "certificate nor violated triangles");
}

StackVerdict stacked_oracle(const Graph& g, const Embedding& w, const OracleParams& p,
                            JsonlLogger* log) {
  p.validate();
  BALCUT_REQUIRE(g.n >= 2, "oracle needs at least two vertices");

  if (auto fb = flatness_balance_oracle(g, w, p, log)) {
    return StackVerdict::reject(std::move(*fb));
  }

  FlowOrCutResult foc = flow_or_cut(g, w, p, log);
  if (foc.kind == FlowCutKind::Feedback) {
    return StackVerdict::reject(std::move(*foc.feedback));
  }
  if (foc.kind == FlowCutKind::CutAccepted) {
    StackYes yes;
    yes.cut_accepted = true;
    yes.bipartition = std::move(foc.bipartition);
    yes.cut_edges = foc.cut_edges;
    yes.kind = "cut_accepted";
    return StackVerdict::accept(std::move(yes));
  }

  HeavyOracleResult ho = heavy_oracle(g, w, p, log);
  if (ho.kind == HeavyKind::Feedback) {
    return StackVerdict::reject(std::move(*ho.feedback));
  }
  StackYes yes;
  yes.cut_accepted = false;
  yes.bipartition = std::move(foc.bipartition);
  yes.cut_edges = foc.cut_edges;
  yes.removal = std::move(ho.outcome);
  yes.kind = foc.kind == FlowCutKind::Degenerate ? "degenerate" : "flow_certified";
  return StackVerdict::accept(std::move(yes));
}

}  // namespace balcut
