#include "balcut/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "balcut/common.hpp"
#include "balcut/driver.hpp"
#include "balcut/hierarchy.hpp"
#include "balcut/io.hpp"

namespace balcut {

namespace {

JsonlLogger make_logger(const std::string& path, bool to_stderr) {
  if (!path.empty()) return JsonlLogger::to_file(path);
  if (to_stderr) return JsonlLogger::to_stderr();
  return {};
}

void write_partition_file(const std::string& path, const Partition& p) {
  std::ostringstream os;
  write_partition(os, p);
  save_text(path, os.str());
}

nlohmann::json op_to_json(const AdversaryOp& op) {
  switch (op.kind) {
    case AdversaryOp::Kind::AddWithin:
      return {{"kind", "within"}, {"side", op.side}, {"value", op.value}};
    case AdversaryOp::Kind::RemoveCut:
      return {{"kind", "removecut"}, {"value", op.value}};
    case AdversaryOp::Kind::AddClique:
      return {{"kind", "clique"}, {"side", op.side}, {"value", op.value}};
    default:
      return {{"kind", "expander"}, {"side", op.side}, {"value", op.value}};
  }
}

}  // namespace

AdversaryOp parse_adversary_op(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  BALCUT_REQUIRE(!parts.empty() && !parts[0].empty(), "empty adversary op");

  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      BALCUT_REQUIRE(used == s.size(), "trailing characters in op number");
      return v;
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("bad number in adversary op: '" + s + "'");
    }
  };

  AdversaryOp op;
  const std::string& kind = parts[0];
  if (kind == "removecut") {
    BALCUT_REQUIRE(parts.size() == 2, "removecut op is 'removecut:probability'");
    op.kind = AdversaryOp::Kind::RemoveCut;
    op.value = num(parts[1]);
    return op;
  }
  BALCUT_REQUIRE(parts.size() == 3, "op format is 'kind:side:value'");
  if (kind == "within") op.kind = AdversaryOp::Kind::AddWithin;
  else if (kind == "clique") op.kind = AdversaryOp::Kind::AddClique;
  else if (kind == "expander") op.kind = AdversaryOp::Kind::AddExpander;
  else throw InputError("unknown adversary op kind: '" + kind + "'");
  op.side = static_cast<int>(num(parts[1]));
  op.value = num(parts[2]);
  return op;
}

CommandResult cmd_generate(const GenerateArgs& args) {
  BALCUT_REQUIRE(!args.graph_out.empty(), "generate needs --out for the graph");
  CommandResult res;
  nlohmann::json cfg;
  cfg["kind"] = args.kind;
  cfg["seed"] = args.seed;

  if (args.kind == "planted") {
    SemiRandomSpec spec = args.spec;
    spec.seed = args.seed;
    Instance inst = generate_semirandom(spec);
    std::ostringstream os;
    write_graph(os, inst.graph);
    save_text(args.graph_out, os.str());
    if (!args.partition_out.empty()) write_partition_file(args.partition_out, inst.planted);

    cfg["n"] = spec.n;
    cfg["a"] = spec.a;
    cfg["eta"] = spec.eta;
    if (spec.frac_a >= 0) cfg["frac_a"] = spec.frac_a;
    cfg["ops"] = nlohmann::json::array();
    for (const auto& op : spec.adversary) cfg["ops"].push_back(op_to_json(op));

    res.doc["result"] = {{"n", inst.graph.n},
                         {"m", inst.graph.m()},
                         {"planted_cut", inst.planted_cut_value},
                         {"cross_random_edges", inst.cross_random_edges},
                         {"alpha_bound", inst.alpha_bound},
                         {"side_a", inst.planted.count(0)},
                         {"side_b", inst.planted.count(1)}};
  } else if (args.kind == "tree") {
    BALCUT_REQUIRE(!args.tree_in.empty(), "tree generation needs --tree");
    ClusterTree t = load_tree(args.tree_in);
    Graph g = generate_hsm(t, args.seed);
    std::ostringstream os;
    write_graph(os, g);
    save_text(args.graph_out, os.str());
    cfg["tree"] = args.tree_in;
    res.doc["result"] = {{"n", g.n},
                         {"m", g.m()},
                         {"expected_cost", expected_hsm_cost(t)}};
  } else {
    throw InputError("unknown generate kind: '" + args.kind + "'");
  }

  res.doc["command"] = "generate";
  res.doc["config"] = cfg;
  return res;
}

CommandResult cmd_solve(const SolveArgs& args) {
  BALCUT_REQUIRE(!args.graph_in.empty(), "solve needs a graph file");
  Graph g = load_graph(args.graph_in);
  JsonlLogger log = make_logger(args.log_path, args.log_stderr);

  DriverConfig dc;
  dc.a = args.a;
  dc.gamma = args.gamma;
  dc.delta_final = args.delta_final;
  dc.seed = args.seed;
  if (args.mmw_T > 0) dc.mmw.T = args.mmw_T;
  if (args.mmw_p > 0) dc.mmw.p = args.mmw_p;
  if (args.mmw_d > 0) dc.mmw.d = args.mmw_d;
  if (args.mmw_epsilon > 0) dc.mmw.epsilon = args.mmw_epsilon;

  bool estimated = args.alpha <= 0;
  CutResult cut;
  double alpha_used;
  bool alpha_degraded = false;
  if (estimated) {
    AlphaEstimate est = estimate_alpha(g, dc, log.enabled() ? &log : nullptr);
    alpha_used = est.alpha;
    alpha_degraded = est.from_fallback;
    cut = std::move(est.best);
  } else {
    dc.alpha = args.alpha;
    alpha_used = args.alpha;
    cut = solve_balanced_cut(g, dc, log.enabled() ? &log : nullptr);
  }

  if (!args.partition_out.empty()) write_partition_file(args.partition_out, cut.partition);

  CommandResult res;
  res.doc["command"] = "solve";
  res.doc["config"] = {{"graph", args.graph_in}, {"a", args.a},
                       {"gamma", args.gamma},    {"seed", args.seed},
                       {"T", dc.mmw.T},          {"p", dc.mmw.p},
                       {"d", dc.mmw.d},          {"epsilon", dc.mmw.epsilon}};
  if (args.delta_final >= 0) res.doc["config"]["delta_final"] = args.delta_final;

  std::int64_t removal_steps = 0, exhausted = 0;
  for (const auto& r : cut.history) {
    if (r.event == "removal") ++removal_steps;
    if (r.event == "exhausted") ++exhausted;
  }
  res.doc["result"] = {{"value", cut.value},
                       {"min_side", cut.min_side},
                       {"accepted", cut.accepted},
                       {"provenance", cut.provenance},
                       {"n", g.n},
                       {"m", g.m()},
                       {"alpha_used", alpha_used},
                       {"alpha_estimated", estimated},
                       {"removal_steps", removal_steps},
                       {"exhausted_solves", exhausted}};
  if (cut.provenance == "fallback_projection" || alpha_degraded) res.exit_code = 2;
  return res;
}

CommandResult cmd_cluster(const ClusterArgs& args) {
  BALCUT_REQUIRE(!args.graph_in.empty(), "cluster needs a graph file");
  Graph g = load_graph(args.graph_in);
  JsonlLogger log = make_logger(args.log_path, args.log_stderr);

  ClusterConfig cc;
  cc.b = args.b;
  cc.size_floor = args.size_floor;
  cc.alpha_mode = args.alpha_mode;
  cc.fixed_alpha = args.fixed_alpha;
  cc.seed = args.seed;
  ClusterTree t = recursive_cluster(g, cc, log.enabled() ? &log : nullptr);

  if (!args.tree_out.empty()) {
    std::ostringstream os;
    write_tree(os, t);
    save_text(args.tree_out, os.str());
  }

  CommandResult res;
  res.doc["command"] = "cluster";
  res.doc["config"] = {{"graph", args.graph_in},
                       {"b", args.b},
                       {"size_floor", size_floor_eff(cc, g.n)},
                       {"alpha_mode", args.alpha_mode},
                       {"seed", args.seed}};
  res.doc["result"] = {{"n", g.n},
                       {"m", g.m()},
                       {"cost", dasgupta_cost(g, t)},
                       {"nodes", t.n_nodes()}};
  return res;
}

CommandResult cmd_eval(const EvalArgs& args) {
  BALCUT_REQUIRE(!args.graph_in.empty(), "eval needs a graph file");
  BALCUT_REQUIRE(args.partition_in.empty() != args.tree_in.empty(),
                 "eval needs exactly one of a partition or a tree");
  Graph g = load_graph(args.graph_in);

  CommandResult res;
  res.doc["command"] = "eval";
  res.doc["config"] = {{"graph", args.graph_in}};
  if (!args.partition_in.empty()) {
    Partition p = load_partition(args.partition_in, g.n);
    res.doc["config"]["partition"] = args.partition_in;
    res.doc["result"] = {{"kind", "cut"},
                         {"value", cut_value(g, p)},
                         {"side_0", p.count(0)},
                         {"side_1", p.count(1)},
                         {"side_2", p.count(2)},
                         {"min_side", p.min_side()}};
  } else {
    ClusterTree t = load_tree(args.tree_in);
    BALCUT_REQUIRE(t.n_leaves == g.n, "tree and graph disagree on vertex count");
    res.doc["config"]["tree"] = args.tree_in;
    res.doc["result"] = {{"kind", "tree"},
                         {"cost", dasgupta_cost(g, t)},
                         {"nodes", t.n_nodes()}};
  }
  return res;
}

}  // namespace balcut
