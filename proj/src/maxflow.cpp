#include "balcut/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "balcut/common.hpp"

namespace balcut {
namespace {

constexpr std::int64_t kScale = 1 << 16;

struct Dinic {
  struct Arc {
    int to;
    std::int64_t cap;
  };

  int n;
  std::vector<Arc> arcs;                 // paired: arc e and e^1 are reverses
  std::vector<std::vector<int>> head;
  std::vector<int> level, iter;

  explicit Dinic(int n_) : n(n_), head(n_), level(n_), iter(n_) {}

  int add(int u, int v, std::int64_t cap_uv, std::int64_t cap_vu) {
    int id = static_cast<int>(arcs.size());
    arcs.push_back({v, cap_uv});
    arcs.push_back({u, cap_vu});
    head[u].push_back(id);
    head[v].push_back(id + 1);
    return id;
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e : head[u]) {
        if (arcs[e].cap > 0 && level[arcs[e].to] < 0) {
          level[arcs[e].to] = level[u] + 1;
          q.push(arcs[e].to);
        }
      }
    }
    return level[t] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t f) {
    if (u == t) return f;
    for (int& idx = iter[u]; idx < static_cast<int>(head[u].size()); ++idx) {
      int e = head[u][idx];
      const Arc& a = arcs[e];
      if (a.cap > 0 && level[a.to] == level[u] + 1) {
        std::int64_t got = dfs(a.to, t, std::min(f, a.cap));
        if (got > 0) {
          arcs[e].cap -= got;
          arcs[e ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }

  std::int64_t run(int s, int t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      std::int64_t f;
      while ((f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) > 0) flow += f;
    }
    return flow;
  }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e : head[u]) {
        if (arcs[e].cap > 0 && !seen[arcs[e].to]) {
          seen[arcs[e].to] = 1;
          q.push(arcs[e].to);
        }
      }
    }
    return seen;
  }
};

void check_terminals(const Graph& g, const std::vector<int>& sources,
                     const std::vector<int>& sinks) {
  BALCUT_REQUIRE(!sources.empty() && !sinks.empty(), "flow needs nonempty terminal sets");
  std::vector<char> mark(g.n, 0);
  for (int v : sources) {
    BALCUT_REQUIRE(v >= 0 && v < g.n, "source out of range");
    BALCUT_REQUIRE(!mark[v], "duplicate source");
    mark[v] = 1;
  }
  for (int v : sinks) {
    BALCUT_REQUIRE(v >= 0 && v < g.n, "sink out of range");
    BALCUT_REQUIRE(mark[v] != 1, "terminal sets must be disjoint");
    BALCUT_REQUIRE(mark[v] != 2, "duplicate sink");
    mark[v] = 2;
  }
}

}  // namespace

FlowResult max_flow_dregular(const Graph& g, const std::vector<int>& sources,
                             const std::vector<int>& sinks, double d) {
  check_terminals(g, sources, sinks);
  BALCUT_REQUIRE(std::isfinite(d) && d >= 0, "terminal capacity must be finite and >= 0");

  // Capacity above n never binds (a vertex meets < n unit edges).
  double d_eff = std::min(d, static_cast<double>(g.n));
  std::int64_t dcap = std::llround(d_eff * kScale);

  int s = g.n, t = g.n + 1;
  Dinic net(g.n + 2);
  std::vector<int> edge_arc(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    edge_arc[e] = net.add(g.edges[e].first, g.edges[e].second, kScale, kScale);
  }
  std::vector<int> src_arc(sources.size()), snk_arc(sinks.size());
  for (std::size_t i = 0; i < sources.size(); ++i) src_arc[i] = net.add(s, sources[i], dcap, 0);
  for (std::size_t i = 0; i < sinks.size(); ++i) snk_arc[i] = net.add(sinks[i], t, dcap, 0);

  std::int64_t flow = net.run(s, t);

  FlowResult fr;
  fr.value = static_cast<double>(flow) / kScale;
  fr.edge_flows.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int a = edge_arc[e];
    // net = (cap_vu - cap_uv) / 2 given both directions started at kScale
    std::int64_t netf = (net.arcs[a ^ 1].cap - net.arcs[a].cap) / 2;
    fr.edge_flows[e] = static_cast<double>(netf) / kScale;
  }
  fr.injections.resize(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    fr.injections[i] = static_cast<double>(dcap - net.arcs[src_arc[i]].cap) / kScale;
  }
  fr.ejections.resize(sinks.size());
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    fr.ejections[i] = static_cast<double>(dcap - net.arcs[snk_arc[i]].cap) / kScale;
  }

  std::vector<char> reach = net.reachable(s);
  fr.mincut.side.assign(g.n, 1);
  for (int v = 0; v < g.n; ++v) {
    if (reach[v]) fr.mincut.side[v] = 0;
  }

  // Max-flow / min-cut audit on the residual partition.
  std::int64_t cut_cap = 0;
  for (auto [u, v] : g.edges) {
    if (reach[u] != reach[v]) cut_cap += kScale;
  }
  for (int v : sources) {
    if (!reach[v]) cut_cap += dcap;
  }
  for (int v : sinks) {
    if (reach[v]) cut_cap += dcap;
  }
  BALCUT_ASSERT(cut_cap == flow, "max flow does not match residual min cut");
  return fr;
}

std::vector<FlowPath> flow_path_decompose(const Graph& g, const std::vector<int>& sources,
                                          const std::vector<int>& sinks,
                                          const FlowResult& fr) {
  check_terminals(g, sources, sinks);
  BALCUT_REQUIRE(fr.edge_flows.size() == g.edges.size(), "flow result does not match graph");

  int s = g.n, t = g.n + 1;
  int nn = g.n + 2;
  // Directed arcs carrying positive net flow, scaled back to integers.
  std::vector<int> to, next_arc;
  std::vector<std::int64_t> rem;
  std::vector<int> head(nn, -1);
  auto add = [&](int u, int v, std::int64_t amount) {
    if (amount <= 0) return;
    to.push_back(v);
    rem.push_back(amount);
    next_arc.push_back(head[u]);
    head[u] = static_cast<int>(to.size()) - 1;
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::int64_t f = std::llround(fr.edge_flows[e] * kScale);
    if (f > 0) add(g.edges[e].first, g.edges[e].second, f);
    if (f < 0) add(g.edges[e].second, g.edges[e].first, -f);
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    add(s, sources[i], std::llround(fr.injections[i] * kScale));
  }
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    add(sinks[i], t, std::llround(fr.ejections[i] * kScale));
  }

  std::vector<int> cursor = head;           // skips exhausted arcs permanently
  std::vector<int> on_path_at(nn, -1);      // position of node on current path
  std::vector<FlowPath> out;

  auto first_live = [&](int u) {
    int a = cursor[u];
    while (a != -1 && rem[a] == 0) a = next_arc[a];
    cursor[u] = a;
    return a;
  };

  while (first_live(s) != -1) {
    std::vector<int> path_nodes = {s};
    std::vector<int> path_arcs;
    on_path_at[s] = 0;
    while (path_nodes.back() != t) {
      int u = path_nodes.back();
      int a = first_live(u);
      // Conservation guarantees an outgoing arc until t is reached.
      BALCUT_ASSERT(a != -1, "flow decomposition: dead end before sink");
      int v = to[a];
      if (on_path_at[v] != -1) {
        // Circulation: cancel the loop v ... u -> v and keep walking from v.
        int pos = on_path_at[v];
        std::int64_t bn = rem[a];
        for (std::size_t i = pos; i < path_arcs.size(); ++i) bn = std::min(bn, rem[path_arcs[i]]);
        rem[a] -= bn;
        for (std::size_t i = pos; i < path_arcs.size(); ++i) rem[path_arcs[i]] -= bn;
        for (std::size_t i = pos + 1; i < path_nodes.size(); ++i) on_path_at[path_nodes[i]] = -1;
        path_nodes.resize(pos + 1);
        path_arcs.resize(pos);
        continue;
      }
      path_arcs.push_back(a);
      path_nodes.push_back(v);
      on_path_at[v] = static_cast<int>(path_nodes.size()) - 1;
    }
    std::int64_t bn = std::numeric_limits<std::int64_t>::max();
    for (int a : path_arcs) bn = std::min(bn, rem[a]);
    for (int a : path_arcs) rem[a] -= bn;
    FlowPath p;
    p.nodes.assign(path_nodes.begin() + 1, path_nodes.end() - 1);
    p.src = p.nodes.front();
    p.dst = p.nodes.back();
    p.amount = static_cast<double>(bn) / kScale;
    out.push_back(std::move(p));
    for (int v : path_nodes) on_path_at[v] = -1;
  }
  return out;
}

}  // namespace balcut
