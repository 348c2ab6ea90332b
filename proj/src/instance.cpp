#include "balcut/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "balcut/common.hpp"
#include "balcut/rng.hpp"

namespace balcut {

namespace {

constexpr std::uint64_t kTagSides = 0x5349;
constexpr std::uint64_t kTagCross = 0x4352;
constexpr std::uint64_t kTagAdversary = 0x4144;
constexpr std::uint64_t kTagHsm = 0x484d;

std::uint64_t pair_index(int n, int u, int v) {
  // Canonical index of an unordered pair, usable as an addressed-draw tag.
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(v);
}

}  // namespace

void SemiRandomSpec::validate() const {
  BALCUT_REQUIRE(n >= 2, "instance needs at least two vertices");
  BALCUT_REQUIRE(a > 0 && a <= 0.5, "balance parameter must lie in (0, 1/2]");
  BALCUT_REQUIRE(eta >= 0 && eta <= 1, "eta must be a probability");
  if (frac_a >= 0) {
    BALCUT_REQUIRE(frac_a >= a && frac_a <= 1 - a,
                   "frac_a must respect the balance parameter");
  }
  for (const auto& op : adversary) {
    BALCUT_REQUIRE(op.side == 0 || op.side == 1, "adversary side must be 0 or 1");
    switch (op.kind) {
      case AdversaryOp::Kind::AddWithin:
        BALCUT_REQUIRE(op.value >= 0, "edge count must be nonnegative");
        break;
      case AdversaryOp::Kind::RemoveCut:
        BALCUT_REQUIRE(op.value >= 0 && op.value <= 1,
                       "deletion probability must lie in [0, 1]");
        break;
      case AdversaryOp::Kind::AddClique:
        BALCUT_REQUIRE(op.value >= 0 && op.value <= 1,
                       "clique fraction must lie in [0, 1]");
        break;
      case AdversaryOp::Kind::AddExpander:
        BALCUT_REQUIRE(op.value >= 0, "expander degree must be nonnegative");
        break;
    }
  }
}

Instance generate_semirandom(const SemiRandomSpec& spec) {
  spec.validate();
  int n = spec.n;
  Rng root(spec.seed);

  // Side assignment: seeded shuffle, prefix becomes side A.
  int size_a = spec.frac_a >= 0 ? static_cast<int>(std::lround(spec.frac_a * n))
                                : static_cast<int>(std::ceil(spec.a * n));
  size_a = std::clamp(size_a, 1, n - 1);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  {
    Rng sides = root.substream(kTagSides);
    sides.shuffle(perm);
  }
  Instance inst;
  inst.planted.side.assign(n, 1);
  std::vector<int> side_a(perm.begin(), perm.begin() + size_a);
  std::vector<int> side_b(perm.begin() + size_a, perm.end());
  std::sort(side_a.begin(), side_a.end());
  std::sort(side_b.begin(), side_b.end());
  for (int v : side_a) inst.planted.side[v] = 0;

  // Random cross edges, one addressed draw per (A, B) pair.
  std::set<std::pair<int, int>> edges;
  Rng cross = root.substream(kTagCross);
  for (int u : side_a) {
    for (int v : side_b) {
      if (cross.bernoulli_at(pair_index(n, u, v), spec.eta)) {
        edges.insert({std::min(u, v), std::max(u, v)});
      }
    }
  }
  inst.cross_random_edges = static_cast<std::int64_t>(edges.size());
  inst.alpha_bound = static_cast<double>(inst.cross_random_edges);

  // Adversary ops, in order, each on its own substream.
  Rng adv_root = root.substream(kTagAdversary);
  for (std::size_t oi = 0; oi < spec.adversary.size(); ++oi) {
    const AdversaryOp& op = spec.adversary[oi];
    Rng stream = adv_root.substream(oi);
    const std::vector<int>& side = op.side == 0 ? side_a : side_b;
    switch (op.kind) {
      case AdversaryOp::Kind::AddWithin: {
        auto want = static_cast<std::int64_t>(std::llround(op.value));
        std::int64_t sz = static_cast<std::int64_t>(side.size());
        std::int64_t within_pairs = sz * (sz - 1) / 2;
        std::int64_t budget = 100 * want + 1000;
        std::int64_t added = 0;
        while (added < want && within_pairs > 0 && budget-- > 0) {
          int u = side[stream.next_below(side.size())];
          int v = side[stream.next_below(side.size())];
          if (u == v) continue;
          if (edges.insert({std::min(u, v), std::max(u, v)}).second) ++added;
        }
        break;
      }
      case AdversaryOp::Kind::RemoveCut: {
        for (auto it = edges.begin(); it != edges.end();) {
          bool cross_edge =
              inst.planted.side[it->first] != inst.planted.side[it->second];
          if (cross_edge &&
              stream.bernoulli_at(pair_index(n, it->first, it->second), op.value)) {
            it = edges.erase(it);
          } else {
            ++it;
          }
        }
        break;
      }
      case AdversaryOp::Kind::AddClique: {
        auto cnt = static_cast<std::size_t>(std::llround(op.value * side.size()));
        cnt = std::min(cnt, side.size());
        for (std::size_t i = 0; i < cnt; ++i) {
          for (std::size_t j = i + 1; j < cnt; ++j) {
            edges.insert({std::min(side[i], side[j]), std::max(side[i], side[j])});
          }
        }
        break;
      }
      case AdversaryOp::Kind::AddExpander: {
        auto deg = static_cast<int>(std::llround(op.value));
        std::vector<int> order = side;
        for (int round = 0; round < deg; ++round) {
          Rng rs = stream.substream(static_cast<std::uint64_t>(round));
          rs.shuffle(order);
          for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
            edges.insert(
                {std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1])});
          }
        }
        break;
      }
    }
  }

  inst.graph = Graph::from_edges(n, {edges.begin(), edges.end()});
  inst.planted_cut_value = 0;
  for (const auto& e : inst.graph.edges) {
    if (inst.planted.side[e.first] != inst.planted.side[e.second])
      ++inst.planted_cut_value;
  }
  return inst;
}

Graph generate_hsm(const ClusterTree& t, std::uint64_t seed) {
  t.validate();
  int n = t.n_leaves;
  std::vector<std::pair<int, int>> edges;
  Rng stream = Rng(seed).substream(kTagHsm);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      double p = t.weight[t.lca(u, v)];
      if (p > 0 && stream.bernoulli_at(pair_index(n, u, v), p)) edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

double expected_hsm_cost(const ClusterTree& t) {
  t.validate();
  std::vector<std::int64_t> cnt = t.leaf_counts();
  auto ch = t.children();
  double cost = 0;
  for (int v = t.n_leaves; v < t.n_nodes(); ++v) {
    double l = static_cast<double>(cnt[ch[v][0]]);
    double r = static_cast<double>(cnt[ch[v][1]]);
    cost += t.weight[v] * l * r * static_cast<double>(cnt[v]);
  }
  return cost;
}

double expected_hsm_cost_pairs(const ClusterTree& t) {
  t.validate();
  std::vector<std::int64_t> cnt = t.leaf_counts();
  double cost = 0;
  for (int u = 0; u < t.n_leaves; ++u) {
    for (int v = u + 1; v < t.n_leaves; ++v) {
      int l = t.lca(u, v);
      cost += t.weight[l] * static_cast<double>(cnt[l]);
    }
  }
  return cost;
}

}  // namespace balcut
