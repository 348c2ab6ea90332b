#include "balcut/driver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {

namespace {

constexpr std::uint64_t kTagDriver = 0x4452;

struct Assembled {
  Partition partition;
  std::int64_t value = 0;
  std::int64_t min_side = 0;
};

// Surviving bipartition plus removed chunks, largest chunk first onto the
// lighter side; the value is measured against the original graph.
Assembled assemble(const Graph& g, const std::vector<int>& alive_ids,
                   const Partition& bip, const std::vector<std::vector<int>>& chunks) {
  Assembled out;
  out.partition.side.assign(g.n, 0);
  std::int64_t w0 = 0, w1 = 0;
  for (std::size_t i = 0; i < alive_ids.size(); ++i) {
    std::int8_t s = bip.side[i] == 0 ? std::int8_t{0} : std::int8_t{1};
    out.partition.side[alive_ids[i]] = s;
    (s == 0 ? w0 : w1) += 1;
  }
  std::vector<std::size_t> order(chunks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return chunks[x].size() > chunks[y].size();
  });
  for (std::size_t ci : order) {
    std::int8_t s = (w0 <= w1) ? std::int8_t{0} : std::int8_t{1};
    for (int v : chunks[ci]) out.partition.side[v] = s;
    (s == 0 ? w0 : w1) += static_cast<std::int64_t>(chunks[ci].size());
  }
  out.value = cut_value(g, out.partition);
  out.min_side = out.partition.min_side();
  return out;
}

Partition balanced_id_split(int n) {
  Partition p;
  p.side.assign(n, 1);
  for (int i = 0; i < (n + 1) / 2; ++i) p.side[i] = 0;
  return p;
}

}  // namespace

void DriverConfig::validate() const {
  BALCUT_REQUIRE(alpha > 0 && std::isfinite(alpha), "driver needs a positive alpha");
  BALCUT_REQUIRE(a > 0 && a <= 0.5, "balance parameter must lie in (0, 1/2]");
  BALCUT_REQUIRE(gamma > 0 && gamma <= 0.5, "gamma must lie in (0, 1/2]");
  BALCUT_REQUIRE(delta0 > 0 && delta0 < 1, "delta0 must lie in (0, 1)");
  BALCUT_REQUIRE(max_outer >= 1 && max_inner >= 1, "iteration caps must be >= 1");
}

CutResult solve_balanced_cut(const Graph& g, const DriverConfig& cfg, JsonlLogger* log) {
  cfg.validate();
  BALCUT_REQUIRE(g.n >= 1, "graph must have at least one vertex");
  int n = g.n;

  CutResult res;
  if (n == 1 || g.m() == 0) {
    res.partition = balanced_id_split(n);
    res.value = 0;
    res.min_side = res.partition.min_side();
    res.accepted = true;
    res.provenance = "trivial";
    return res;
  }

  double delta_final = cfg.delta_final >= 0 ? cfg.delta_final : 1.0 / std::log(double(n));
  int t_outer = 1;
  if (delta_final < cfg.delta0) {
    t_outer = static_cast<int>(
        std::ceil(std::log(cfg.delta0 / delta_final) / std::log(100.0)));
    t_outer = std::clamp(t_outer, 1, cfg.max_outer);
  }

  Graph cur = g;
  std::vector<int> alive_ids(n);
  std::iota(alive_ids.begin(), alive_ids.end(), 0);
  std::vector<std::vector<int>> chunks;

  std::optional<Assembled> best;       // balanced harvest candidates only
  std::optional<Embedding> last_w;     // for the projection fallback
  std::vector<int> last_w_ids;

  Rng seeder = Rng(cfg.seed).substream(kTagDriver);
  double delta = cfg.delta0;
  bool stagnant = false;

  auto consider_harvest = [&](const Partition& bip, const char* why) {
    if (static_cast<int>(bip.side.size()) != cur.n) return;
    int floor_side = static_cast<int>(std::ceil(cfg.a / 10.0 * cur.n));
    if (bip.min_side() < floor_side) return;
    Assembled cand = assemble(g, alive_ids, bip, chunks);
    if (!best || cand.value < best->value) {
      best = std::move(cand);
      if (log && log->enabled()) {
        log->line({{"event", "harvest"}, {"why", why}, {"value", best->value}});
      }
    }
  };

  for (int outer = 0; outer < t_outer && !stagnant; ++outer) {
    for (int inner = 0; inner < cfg.max_inner; ++inner) {
      IterationRecord rec;
      rec.outer = outer;
      rec.inner = inner;
      rec.n_cur = cur.n;
      rec.m_cur = cur.m();
      rec.delta = delta;

      if (cur.n < 2 || cur.m() == 0) {
        Partition bip = balanced_id_split(cur.n);
        Assembled done = assemble(g, alive_ids, bip, chunks);
        res.partition = std::move(done.partition);
        res.value = done.value;
        res.min_side = done.min_side;
        res.accepted = true;
        res.provenance = "trivial";
        rec.event = "trivial";
        res.history.push_back(rec);
        return res;
      }

      OracleParams op = cfg.oracle;
      op.a = cfg.a;
      op.alpha = cfg.alpha;
      op.gamma = cfg.gamma;
      op.delta = delta;
      op.n_ref = n;
      op.ell = static_cast<double>(cur.n) / n;
      op.seed = seeder.substream(static_cast<std::uint64_t>(outer))
                    .substream(static_cast<std::uint64_t>(inner))
                    .next_u64();
      op.validate();

      MmwConfig mc = cfg.mmw;
      mc.n = cur.n;
      mc.r = cur.n;
      mc.alpha = cfg.alpha;
      mc.gamma = cfg.gamma;
      mc.zeta = zeta_floor(op, cur.n);
      mc.seed = op.seed ^ 0x9e3779b97f4a7c15ull;

      const Graph& gi = cur;
      auto oracle = [&](const Embedding& w, int) {
        StackVerdict v = stacked_oracle(gi, w, op, log);
        // The flatness gate can reject iterates whose flow cut would already
        // clear the accept bar; probe those so an acceptable cut seen along
        // the way is never lost to later oscillation.
        if (!v.yes && v.feedback &&
            (v.feedback->origin == "flatness" || v.feedback->origin == "balance")) {
          if (auto acc = flow_accept_probe(gi, w, op)) {
            consider_harvest(acc->bipartition, "accept_probe");
          }
        }
        return v;
      };
      MmwOutcome<StackYes> outcome = mmw_solve<StackYes>(oracle, mc);
      rec.mmw_iterations = outcome.iterations;
      if (log && log->enabled()) {
        for (const auto& it : outcome.log) {
          // c_tilde restates the width in the oracle's natural alpha/(ell*n)
          // scale (ell*n = surviving vertex count) so runs can audit the
          // declared width bound.
          log->line({{"event", "mmw_iter"},
                     {"outer", outer},
                     {"inner", inner},
                     {"t", it.t},
                     {"yes", it.yes},
                     {"origin", it.origin},
                     {"margin", it.margin},
                     {"dual", it.dual_value},
                     {"width", it.width},
                     {"c_tilde", it.width * gi.n / cfg.alpha},
                     {"ms", it.wallclock_ms}});
        }
      }
      last_w = outcome.last_iterate;
      last_w_ids = alive_ids;

      if (!outcome.yes) {
        // Exhausted the iteration budget: harvest what the last iterate
        // offers and fall through to the next scale (or the final fallback).
        FlowOrCutResult foc = flow_or_cut(cur, outcome.last_iterate, op, log);
        if (foc.kind == FlowCutKind::CutAccepted || foc.kind == FlowCutKind::FlowCertified) {
          consider_harvest(foc.bipartition, "exhausted_flow");
        }
        rec.event = "exhausted";
        res.history.push_back(rec);
        break;
      }

      StackYes yes = std::move(*outcome.yes);
      if (yes.cut_accepted) {
        Assembled done = assemble(g, alive_ids, yes.bipartition, chunks);
        res.partition = std::move(done.partition);
        res.value = done.value;
        res.min_side = done.min_side;
        res.accepted = true;
        res.provenance = "flow_accept";
        rec.event = "cut_accepted";
        res.history.push_back(rec);
        return res;
      }

      // Removal step: strip long edges (only while they stay a minority) and
      // pull the carved sides out of the graph.
      if (yes.kind == "flow_certified") consider_harvest(yes.bipartition, "flow_certified");

      std::vector<std::pair<int, int>> strip;
      if (static_cast<std::int64_t>(yes.removal.e_star.size()) * 2 <=
          static_cast<std::int64_t>(cur.m())) {
        strip = yes.removal.e_star;
      }
      std::vector<int> keep_compact;
      std::vector<int> removed0, removed1;
      for (int v = 0; v < cur.n; ++v) {
        switch (yes.removal.tripartition.side[v]) {
          case 0: removed0.push_back(alive_ids[v]); break;
          case 1: removed1.push_back(alive_ids[v]); break;
          default: keep_compact.push_back(v); break;
        }
      }
      rec.long_edges_removed = static_cast<std::int64_t>(strip.size());
      rec.vertices_removed =
          static_cast<std::int64_t>(removed0.size() + removed1.size());

      if (strip.empty() && rec.vertices_removed == 0) {
        rec.event = "stagnant";
        res.history.push_back(rec);
        stagnant = true;
        break;
      }
      if (keep_compact.empty()) {
        // The removal consumed every vertex; treat the two removal sides as
        // the surviving bipartition rather than losing them to chunks.
        Partition bip;
        bip.side.assign(cur.n, 0);
        for (int v = 0; v < cur.n; ++v)
          bip.side[v] = yes.removal.tripartition.side[v] == 0 ? std::int8_t{0} : std::int8_t{1};
        consider_harvest(bip, "total_removal");
        rec.event = "stagnant";
        res.history.push_back(rec);
        stagnant = true;
        break;
      }

      if (!strip.empty()) cur = cur.without_edges(strip);
      if (!removed0.empty()) chunks.push_back(std::move(removed0));
      if (!removed1.empty()) chunks.push_back(std::move(removed1));
      if (rec.vertices_removed > 0) {
        std::vector<int> next_ids;
        next_ids.reserve(keep_compact.size());
        for (int v : keep_compact) next_ids.push_back(alive_ids[v]);
        cur = cur.induced(keep_compact);
        alive_ids = std::move(next_ids);
      }
      rec.event = "removal";
      res.history.push_back(rec);
      if (log && log->enabled()) {
        log->line({{"event", "removal_step"},
                   {"outer", outer},
                   {"inner", inner},
                   {"n", cur.n},
                   {"m", cur.m()},
                   {"stripped", strip.size()},
                   {"carved", rec.vertices_removed}});
      }
    }
    delta = std::max(delta / 100.0, std::min(delta, delta_final));
  }

  if (best) {
    res.partition = std::move(best->partition);
    res.value = best->value;
    res.min_side = best->min_side;
    res.accepted = false;
    res.provenance = "harvest";
    return res;
  }

  // Nothing certified and nothing harvested: median split on the first
  // coordinate of the last iterate, remaining chunks distributed as usual.
  Partition bip;
  if (last_w && static_cast<int>(last_w_ids.size()) == last_w->n) {
    std::vector<int> idx(last_w->n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
      return last_w->col(x)[0] < last_w->col(y)[0];
    });
    bip.side.assign(last_w->n, 1);
    for (int i = 0; i < last_w->n / 2; ++i) bip.side[idx[i]] = 0;
    Assembled done = assemble(g, last_w_ids, bip, chunks);
    res.partition = std::move(done.partition);
    res.value = done.value;
    res.min_side = done.min_side;
  } else {
    res.partition = balanced_id_split(n);
    res.value = cut_value(g, res.partition);
    res.min_side = res.partition.min_side();
  }
  res.accepted = false;
  res.provenance = "fallback_projection";
  return res;
}

AlphaEstimate estimate_alpha(const Graph& g, DriverConfig cfg, JsonlLogger* log) {
  AlphaEstimate est;
  BALCUT_REQUIRE(g.n >= 1, "graph must have at least one vertex");
  if (g.m() == 0) {
    est.alpha = 1;
    cfg.alpha = 1;
    est.best = solve_balanced_cut(g, cfg, log);
    est.tried.push_back(1);
    return est;
  }

  double delta_final = cfg.delta_final >= 0 ? cfg.delta_final : 1.0 / std::log(double(g.n));
  double kap = cfg.oracle.kappa >= 0 ? cfg.oracle.kappa
                                     : std::sqrt(std::log(double(std::max(g.n, 2))));
  double bar_factor = cfg.oracle.cut_threshold *
                      (1 + delta_final * kap * std::sqrt(std::log(double(std::max(g.n, 2)))));
  int balance_floor = static_cast<int>(std::ceil(cfg.a / 10.0 * g.n));

  double alpha = static_cast<double>(g.m());
  bool any = false;
  while (alpha >= 1) {
    cfg.alpha = alpha;
    est.tried.push_back(alpha);
    CutResult r = solve_balanced_cut(g, cfg, log);
    bool ok = r.provenance != "fallback_projection" &&
              static_cast<double>(r.value) <= bar_factor * alpha &&
              r.min_side >= balance_floor;
    if (log && log->enabled()) {
      log->line({{"event", "alpha_probe"},
                 {"alpha", alpha},
                 {"value", r.value},
                 {"ok", ok}});
    }
    if (!ok) break;
    est.alpha = alpha;
    est.best = std::move(r);
    any = true;
    alpha /= 2;
  }
  if (!any) {
    est.alpha = static_cast<double>(g.m());
    est.from_fallback = true;
    cfg.alpha = est.alpha;
    est.best = solve_balanced_cut(g, cfg, log);
  }
  return est;
}

}  // namespace balcut
