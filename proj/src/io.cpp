#include "balcut/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "balcut/common.hpp"

namespace balcut {

namespace {

// Next content line split into whitespace tokens; empty at EOF.
std::vector<std::string> next_tokens(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) return toks;
  }
  return {};
}

std::int64_t to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    BALCUT_REQUIRE(used == s.size(), std::string("trailing characters in ") + what);
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(std::string("expected an integer for ") + what + ", got '" + s + "'");
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    BALCUT_REQUIRE(used == s.size(), std::string("trailing characters in ") + what);
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(std::string("expected a number for ") + what + ", got '" + s + "'");
  }
}

}  // namespace

Graph read_graph(std::istream& in) {
  auto header = next_tokens(in);
  BALCUT_REQUIRE(header.size() == 2, "graph header must be 'n m'");
  auto n = to_int(header[0], "vertex count");
  auto m = to_int(header[1], "edge count");
  BALCUT_REQUIRE(n >= 0 && m >= 0, "graph header values must be nonnegative");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    auto toks = next_tokens(in);
    BALCUT_REQUIRE(toks.size() == 2, "edge line must be 'u v'");
    edges.push_back({static_cast<int>(to_int(toks[0], "edge endpoint")),
                     static_cast<int>(to_int(toks[1], "edge endpoint"))});
  }
  return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.m() << '\n';
  for (const auto& e : g.edges) out << e.first << ' ' << e.second << '\n';
}

Partition read_partition(std::istream& in, int expect_n) {
  auto header = next_tokens(in);
  BALCUT_REQUIRE(header.size() == 1, "partition header must be 'n'");
  auto n = to_int(header[0], "vertex count");
  BALCUT_REQUIRE(n >= 0, "vertex count must be nonnegative");
  BALCUT_REQUIRE(expect_n < 0 || n == expect_n,
                 "partition size does not match the graph");
  Partition p;
  p.side.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto toks = next_tokens(in);
    BALCUT_REQUIRE(toks.size() == 1, "partition line must be a single label");
    auto lbl = to_int(toks[0], "label");
    BALCUT_REQUIRE(lbl >= 0 && lbl <= 2, "labels must be 0, 1, or 2");
    p.side.push_back(static_cast<std::int8_t>(lbl));
  }
  return p;
}

void write_partition(std::ostream& out, const Partition& p) {
  out << p.n() << '\n';
  for (auto s : p.side) out << static_cast<int>(s) << '\n';
}

Embedding read_embedding(std::istream& in) {
  auto header = next_tokens(in);
  BALCUT_REQUIRE(header.size() == 3, "embedding header must be 'd n trace_scale'");
  auto d = to_int(header[0], "dimension");
  auto n = to_int(header[1], "vertex count");
  double tr = to_double(header[2], "trace scale");
  BALCUT_REQUIRE(d >= 1 && n >= 0, "embedding dimensions must be positive");
  Embedding w;
  w.d = static_cast<int>(d);
  w.n = static_cast<int>(n);
  w.trace_scale = tr;
  w.vecs.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto toks = next_tokens(in);
    BALCUT_REQUIRE(static_cast<std::int64_t>(toks.size()) == d,
                   "embedding line must hold d coordinates");
    for (const auto& t : toks) w.vecs.push_back(to_double(t, "coordinate"));
  }
  return w;
}

void write_embedding(std::ostream& out, const Embedding& w) {
  out << w.d << ' ' << w.n << ' ';
  out.precision(17);
  out << w.trace_scale << '\n';
  for (int i = 0; i < w.n; ++i) {
    const double* c = w.col(i);
    for (int r = 0; r < w.d; ++r) out << (r ? " " : "") << c[r];
    out << '\n';
  }
}

ClusterTree read_tree(std::istream& in) {
  auto header = next_tokens(in);
  BALCUT_REQUIRE(header.size() == 1, "tree header must be 'n_nodes'");
  auto nn = to_int(header[0], "node count");
  BALCUT_REQUIRE(nn >= 1 && nn % 2 == 1, "full binary tree has an odd node count");
  ClusterTree t;
  t.n_leaves = static_cast<int>((nn + 1) / 2);
  t.parent.reserve(static_cast<std::size_t>(nn));
  t.weight.reserve(static_cast<std::size_t>(nn));
  for (std::int64_t i = 0; i < nn; ++i) {
    auto toks = next_tokens(in);
    BALCUT_REQUIRE(toks.size() == 1 || toks.size() == 2,
                   "tree line must be 'parent' or 'parent weight'");
    t.parent.push_back(static_cast<int>(to_int(toks[0], "parent")));
    t.weight.push_back(toks.size() == 2 ? to_double(toks[1], "weight") : 0.0);
  }
  t.validate();
  return t;
}

void write_tree(std::ostream& out, const ClusterTree& t) {
  out << t.n_nodes() << '\n';
  out.precision(17);
  for (int v = 0; v < t.n_nodes(); ++v) {
    out << t.parent[v] << ' ' << t.weight[v] << '\n';
  }
}

namespace {

template <class T>
T load_from(const std::string& path, T (*reader)(std::istream&), const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot open ") + what + " file: " + path);
  return reader(in);
}

}  // namespace

Graph load_graph(const std::string& path) { return load_from(path, read_graph, "graph"); }

Partition load_partition(const std::string& path, int expect_n) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open partition file: " + path);
  return read_partition(in, expect_n);
}

Embedding load_embedding(const std::string& path) {
  return load_from(path, read_embedding, "embedding");
}

ClusterTree load_tree(const std::string& path) { return load_from(path, read_tree, "tree"); }

void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << content;
  if (!out) throw InputError("failed writing output file: " + path);
}

namespace {

std::string type_name(const nlohmann::json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool type_matches(const std::string& want, const nlohmann::json& v) {
  std::string got = type_name(v);
  if (want == got) return true;
  if (want == "number" && got == "integer") return true;
  return false;
}

std::string check(const nlohmann::json& doc, const nlohmann::json& schema,
                  const std::string& where) {
  if (schema.contains("type")) {
    const auto& ty = schema["type"];
    bool ok = false;
    if (ty.is_string()) {
      ok = type_matches(ty.get<std::string>(), doc);
    } else if (ty.is_array()) {
      for (const auto& t : ty)
        if (type_matches(t.get<std::string>(), doc)) ok = true;
    }
    if (!ok) return where + ": expected type " + ty.dump() + ", got " + type_name(doc);
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"])
      if (v == doc) ok = true;
    if (!ok) return where + ": value not in enum " + schema["enum"].dump();
  }
  if (doc.is_number()) {
    if (schema.contains("minimum") && doc.get<double>() < schema["minimum"].get<double>())
      return where + ": below minimum " + schema["minimum"].dump();
    if (schema.contains("maximum") && doc.get<double>() > schema["maximum"].get<double>())
      return where + ": above maximum " + schema["maximum"].dump();
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!doc.contains(k.get<std::string>()))
          return where + ": missing required key '" + k.get<std::string>() + "'";
      }
    }
    const nlohmann::json* props =
        schema.contains("properties") ? &schema["properties"] : nullptr;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props && props->contains(it.key())) {
        std::string err = check(it.value(), (*props)[it.key()], where + "/" + it.key());
        if (!err.empty()) return err;
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"].is_boolean() &&
                 !schema["additionalProperties"].get<bool>()) {
        return where + ": unexpected key '" + it.key() + "'";
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      std::string err = check(doc[i], schema["items"], where + "/" + std::to_string(i));
      if (!err.empty()) return err;
    }
  }
  return "";
}

}  // namespace

std::string schema_violation(const nlohmann::json& doc, const nlohmann::json& schema) {
  return check(doc, schema, "");
}

}  // namespace balcut
