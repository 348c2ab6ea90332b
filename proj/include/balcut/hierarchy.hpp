#pragma once

#include <cstdint>
#include <string>

#include "balcut/driver.hpp"
#include "balcut/graph.hpp"
#include "balcut/log.hpp"
#include "balcut/tree.hpp"

namespace balcut {

// Settings for top-down hierarchical clustering. Each recursion step asks the
// balanced-cut driver for a b-balanced split of the current vertex set;
// below size_floor (or when the solver degrades) splits fall back to an
// arbitrary even division in vertex-id order.
struct ClusterConfig {
  double b = 1.0 / 3;
  int size_floor = -1;              // <0: max(8, ceil(n^(2/3)))
  std::string alpha_mode = "auto";  // "auto" | "estimate" | "fixed"
  double fixed_alpha = -1;
  std::uint64_t seed = 0;
  DriverConfig driver;

  void validate() const;
};

int size_floor_eff(const ClusterConfig& cfg, int n);

ClusterTree recursive_cluster(const Graph& g, const ClusterConfig& cfg,
                              JsonlLogger* log = nullptr);

}  // namespace balcut
