#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "balcut/embedding.hpp"
#include "balcut/graph.hpp"
#include "balcut/tree.hpp"

namespace balcut {

// Text formats. Lines starting with '#' and blank lines are skipped.
//
//   graph:      "n m" then m lines "u v"
//   partition:  "n" then n label lines
//   embedding:  "d n trace_scale" then n lines of d coordinates
//   tree:       "n_nodes" then n_nodes lines "parent weight" (root parent -1)

Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

Partition read_partition(std::istream& in, int expect_n = -1);
void write_partition(std::ostream& out, const Partition& p);

Embedding read_embedding(std::istream& in);
void write_embedding(std::ostream& out, const Embedding& w);

ClusterTree read_tree(std::istream& in);
void write_tree(std::ostream& out, const ClusterTree& t);

// Path conveniences; throw InputError with the path in the message.
Graph load_graph(const std::string& path);
Partition load_partition(const std::string& path, int expect_n = -1);
Embedding load_embedding(const std::string& path);
ClusterTree load_tree(const std::string& path);
void save_text(const std::string& path, const std::string& content);

// Minimal JSON schema checker covering the subset used by the bundled
// schemas: type, properties, required, additionalProperties (bool), items,
// enum, minimum/maximum, integer vs number. Returns the first violation as
// "<json-pointer>: <problem>", or an empty string when the document conforms.
std::string schema_violation(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace balcut
