#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "balcut/commands.hpp"
#include "balcut/common.hpp"

namespace {

std::uint64_t env_seed() {
  const char* s = std::getenv("BALCUT_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw balcut::InputError(std::string("BALCUT_SEED is not an integer: '") + s + "'");
  }
}

int emit(const balcut::CommandResult& res) {
  std::cout << res.doc.dump(2) << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced graph cuts and hierarchical clustering"};
  app.require_subcommand(1);

  int threads = 1;  // reserved; the solver currently runs single-threaded
  app.add_option("--threads", threads, "worker threads (reserved, clamped to 1)");

  balcut::GenerateArgs gen;
  std::vector<std::string> op_specs;
  bool gen_seed_set = false;
  auto* cg = app.add_subcommand("generate", "sample benchmark instances");
  cg->add_option("--kind", gen.kind, "instance family: planted | tree");
  cg->add_option("-n,--n", gen.spec.n, "vertex count (planted)");
  cg->add_option("-a,--a", gen.spec.a, "min side fraction (planted)");
  cg->add_option("--frac-a", gen.spec.frac_a, "exact side-A fraction (planted)");
  cg->add_option("--eta", gen.spec.eta, "cross-pair edge probability (planted)");
  cg->add_option("--op", op_specs,
                 "adversary op, e.g. clique:0:1, within:1:500, expander:0:6, removecut:0.3");
  cg->add_option("--tree", gen.tree_in, "weighted tree file (tree kind)");
  cg->add_option("-o,--out", gen.graph_out, "output graph file")->required();
  cg->add_option("--partition-out", gen.partition_out, "write the planted sides here");
  cg->add_option("--seed", gen.seed, "random seed (default: BALCUT_SEED or 0)")
      ->trigger_on_parse()
      ->each([&](const std::string&) { gen_seed_set = true; });
  cg->add_option("--log", gen.log_path, "JSONL diagnostics file");
  cg->add_flag("--verbose", gen.log_stderr, "JSONL diagnostics on stderr");

  balcut::SolveArgs sol;
  bool sol_seed_set = false;
  auto* cs = app.add_subcommand("solve", "find a balanced low-cut bipartition");
  cs->add_option("graph", sol.graph_in, "input graph file")->required();
  cs->add_option("-a,--a", sol.a, "required min side fraction");
  cs->add_option("--alpha", sol.alpha, "scale the certificates work against (default: estimated)");
  cs->add_option("--gamma", sol.gamma, "certificate margin parameter");
  cs->add_option("--delta-final", sol.delta_final, "final long-edge scale (default: 1/ln n)");
  cs->add_option("--mmw-T", sol.mmw_T, "solver iteration budget");
  cs->add_option("--mmw-p", sol.mmw_p, "polynomial degree of the iterate map");
  cs->add_option("--mmw-d", sol.mmw_d, "sketch dimension");
  cs->add_option("--mmw-epsilon", sol.mmw_epsilon, "solver step size");
  cs->add_option("--partition-out", sol.partition_out, "write the bipartition here");
  cs->add_option("--seed", sol.seed, "random seed (default: BALCUT_SEED or 0)")
      ->trigger_on_parse()
      ->each([&](const std::string&) { sol_seed_set = true; });
  cs->add_option("--log", sol.log_path, "JSONL diagnostics file");
  cs->add_flag("--verbose", sol.log_stderr, "JSONL diagnostics on stderr");

  balcut::ClusterArgs clu;
  bool clu_seed_set = false;
  auto* cc = app.add_subcommand("cluster", "build a hierarchical clustering tree");
  cc->add_option("graph", clu.graph_in, "input graph file")->required();
  cc->add_option("-b,--b", clu.b, "split balance handed to the cut solver");
  cc->add_option("--size-floor", clu.size_floor,
                 "below this size splits are arbitrary (default: max(8, n^(2/3)))");
  cc->add_option("--alpha-mode", clu.alpha_mode, "auto | estimate | fixed");
  cc->add_option("--alpha", clu.fixed_alpha, "scale for --alpha-mode fixed");
  cc->add_option("--tree-out", clu.tree_out, "write the tree here");
  cc->add_option("--seed", clu.seed, "random seed (default: BALCUT_SEED or 0)")
      ->trigger_on_parse()
      ->each([&](const std::string&) { clu_seed_set = true; });
  cc->add_option("--log", clu.log_path, "JSONL diagnostics file");
  cc->add_flag("--verbose", clu.log_stderr, "JSONL diagnostics on stderr");

  balcut::EvalArgs ev;
  auto* ce = app.add_subcommand("eval", "score a partition or a tree against a graph");
  ce->add_option("graph", ev.graph_in, "input graph file")->required();
  ce->add_option("--partition", ev.partition_in, "partition file to score");
  ce->add_option("--tree", ev.tree_in, "tree file to score");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads != 1) {
      std::cerr << "note: --threads is reserved; running single-threaded\n";
    }
    if (cg->parsed()) {
      if (!gen_seed_set) gen.seed = env_seed();
      for (const auto& s : op_specs) gen.spec.adversary.push_back(balcut::parse_adversary_op(s));
      return emit(balcut::cmd_generate(gen));
    }
    if (cs->parsed()) {
      if (!sol_seed_set) sol.seed = env_seed();
      return emit(balcut::cmd_solve(sol));
    }
    if (cc->parsed()) {
      if (!clu_seed_set) clu.seed = env_seed();
      return emit(balcut::cmd_cluster(clu));
    }
    if (ce->parsed()) {
      return emit(balcut::cmd_eval(ev));
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const balcut::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
