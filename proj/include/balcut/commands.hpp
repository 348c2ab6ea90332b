#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "balcut/instance.hpp"

namespace balcut {

// Library-level entry points behind the CLI subcommands. Each returns the
// JSON document printed to stdout plus the process exit code, so behavior is
// testable byte for byte without spawning a process. Result documents are
// deterministic: timings and other run diagnostics go to the JSONL log only.
struct CommandResult {
  nlohmann::json doc;
  int exit_code = 0;
};

// "kind:side:value" op spec, e.g. "clique:0:1" or "removecut:0.3";
// kinds: within, removecut (no side), clique, expander.
AdversaryOp parse_adversary_op(const std::string& text);

struct GenerateArgs {
  std::string kind = "planted";  // "planted" | "tree"
  SemiRandomSpec spec;           // planted instances
  std::string tree_in;           // tree-model instances
  std::string graph_out;
  std::string partition_out;  // optional: planted sides
  std::uint64_t seed = 0;
  std::string log_path;
  bool log_stderr = false;
};

struct SolveArgs {
  std::string graph_in;
  double a = 0.4;
  double alpha = -1;  // <0: estimate from the graph
  double gamma = 0.25;
  double delta_final = -1;
  std::uint64_t seed = 0;
  int mmw_T = -1;      // <0 keeps the default
  int mmw_p = -1;
  int mmw_d = -1;
  double mmw_epsilon = -1;
  std::string partition_out;
  std::string log_path;
  bool log_stderr = false;
};

struct ClusterArgs {
  std::string graph_in;
  double b = 1.0 / 3;
  int size_floor = -1;
  std::string alpha_mode = "auto";
  double fixed_alpha = -1;
  std::uint64_t seed = 0;
  std::string tree_out;
  std::string log_path;
  bool log_stderr = false;
};

struct EvalArgs {
  std::string graph_in;
  std::string partition_in;  // exactly one of partition_in / tree_in
  std::string tree_in;
};

CommandResult cmd_generate(const GenerateArgs& args);
CommandResult cmd_solve(const SolveArgs& args);
CommandResult cmd_cluster(const ClusterArgs& args);
CommandResult cmd_eval(const EvalArgs& args);

}  // namespace balcut
