#pragma once

// JSON forms of the core value types.
//   graph:    {"num_vertices": n, "edges": [[s,t],...]}
//   resolver: {"domain": <graph>, "codomain": <graph>,
//              "vertex_map": [...], "edge_map": [...]}

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bunchy/graph.hpp"
#include "bunchy/resolver.hpp"

namespace bunchy {

using Json = nlohmann::ordered_json;

Json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
Graph graph_from_json(const Json& j);

Json resolver_to_json(const RightResolver& phi);
RightResolver resolver_from_json(const nlohmann::json& j);
RightResolver read_resolver(std::string_view text);
std::string write_resolver(const RightResolver& phi);

Json partition_to_json(const VertexPartition& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace bunchy
