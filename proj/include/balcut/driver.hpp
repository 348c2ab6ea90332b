#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "balcut/graph.hpp"
#include "balcut/log.hpp"
#include "balcut/mmw.hpp"
#include "balcut/oracles.hpp"

namespace balcut {

// Settings for the full balanced-cut search. The embedded mmw/oracle configs
// act as templates: per-solve fields (dimension, trace, alpha, seeds, the
// current long-edge scale) are filled in by the driver.
struct DriverConfig {
  double a = 0.4;
  double alpha = -1;  // required: scale the certificates work against
  double gamma = 0.25;
  double delta0 = 1.0 / 200;
  double delta_final = -1;  // <0: 1 / ln n
  std::uint64_t seed = 0;
  int max_outer = 5;
  int max_inner = 64;  // removal steps per scale
  MmwConfig mmw;
  OracleParams oracle;

  // Production defaults: the theory couplings on (epsilon, T, p) are far out
  // of reach at these sizes, so the solver runs an aggressive step size with
  // a Taylor degree covering the accumulated operator norm (p >= eps*T/2).
  DriverConfig() {
    mmw.relax_couplings = true;
    mmw.epsilon = 3.5;
    mmw.T = 16;
    mmw.p = 34;
  }
  void validate() const;
};

struct IterationRecord {
  int outer = 0;
  int inner = 0;
  int n_cur = 0;
  std::int64_t m_cur = 0;
  double delta = 0;
  std::string event;  // "cut_accepted" | "removal" | "exhausted" | "stagnant" | "trivial"
  std::int64_t long_edges_removed = 0;
  std::int64_t vertices_removed = 0;
  int mmw_iterations = 0;
};

struct CutResult {
  Partition partition;  // over the original vertices, labels {0, 1}
  std::int64_t value = 0;     // cut edges in the original graph
  std::int64_t min_side = 0;
  bool accepted = false;  // an oracle-accepted cut anchors the partition
  std::string provenance;  // "flow_accept" | "trivial" | "harvest" | "fallback_projection"
  std::vector<IterationRecord> history;
};

// Runs the iterated solve-route-remove loop and assembles the final
// bipartition from the surviving cut plus the removed chunks.
CutResult solve_balanced_cut(const Graph& g, const DriverConfig& cfg,
                             JsonlLogger* log = nullptr);

// Geometric scan for the smallest scale the solver still certifies.
struct AlphaEstimate {
  double alpha = 0;
  bool from_fallback = false;  // no scale passed; alpha degraded to m
  std::vector<double> tried;
  CutResult best;
};

AlphaEstimate estimate_alpha(const Graph& g, DriverConfig cfg, JsonlLogger* log = nullptr);

}  // namespace balcut
