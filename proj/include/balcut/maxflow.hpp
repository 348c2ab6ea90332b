#pragma once

#include <vector>

#include "balcut/graph.hpp"

namespace balcut {

// Result of a terminal-capacitated max-flow on an undirected unit-capacity
// graph. All quantities are exact multiples of 2^-16 (the computation runs on
// integers scaled by 2^16), so conservation identities hold to double
// precision exactly.
struct FlowResult {
  double value = 0;                // max flow == capacity of mincut
  std::vector<double> edge_flows;  // per g.edges; sign: + means first -> second
  std::vector<double> injections;  // per source, flow entering (<= d)
  std::vector<double> ejections;   // per sink, flow leaving (<= d)
  Partition mincut;                // side 0 = residual-reachable from the source terminal
};

// Max flow from a super-source attached to every vertex of `sources` with
// capacity d, to a super-sink attached to every vertex of `sinks` with
// capacity d. Real edges have capacity 1 in each direction. The terminal
// capacity is capped at the vertex count (larger values never bind).
FlowResult max_flow_dregular(const Graph& g, const std::vector<int>& sources,
                             const std::vector<int>& sinks, double d);

// One source-to-sink flow path over real vertices.
struct FlowPath {
  int src = -1;
  int dst = -1;
  double amount = 0;
  std::vector<int> nodes;  // src ... dst
};

// Peels the flow of `fr` into source-to-sink paths. At most m + 2n paths;
// amounts sum to fr.value. Internal circulations, if any, are cancelled and
// do not appear in the output.
std::vector<FlowPath> flow_path_decompose(const Graph& g, const std::vector<int>& sources,
                                          const std::vector<int>& sinks,
                                          const FlowResult& fr);

}  // namespace balcut
