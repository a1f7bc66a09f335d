#include "bunchy/io.hpp"

#include <fstream>
#include <sstream>

#include "bunchy/errors.hpp"

namespace bunchy {

namespace {

template <typename J>
std::size_t index_of(const J& v, const char* what) {
  if (!v.is_number_integer() || v.template get<long long>() < 0) {
    throw Error(std::string("expected a non-negative integer for ") + what);
  }
  return v.template get<std::size_t>();
}

template <typename J>
Graph graph_from(const J& j) {
  if (!j.is_object() || !j.contains("num_vertices") || !j.contains("edges") ||
      !j["edges"].is_array()) {
    throw Error("graph JSON must be an object with num_vertices and edges");
  }
  const std::size_t n = index_of(j["num_vertices"], "num_vertices");
  std::vector<Edge> edges;
  edges.reserve(j["edges"].size());
  for (const auto& pair : j["edges"]) {
    if (!pair.is_array() || pair.size() != 2) throw Error("each edge must be a [source, target] pair");
    const std::size_t s = index_of(pair[0], "edge source");
    const std::size_t t = index_of(pair[1], "edge target");
    edges.push_back({static_cast<Vertex>(s), static_cast<Vertex>(t)});
  }
  return Graph(n, std::move(edges));
}

}  // namespace

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.source, e.target});
  Json j;
  j["num_vertices"] = g.vertex_count();
  j["edges"] = std::move(edges);
  return j;
}

Graph graph_from_json(const nlohmann::json& j) { return graph_from(j); }
Graph graph_from_json(const Json& j) { return graph_from(j); }

Json resolver_to_json(const RightResolver& phi) {
  Json j;
  j["domain"] = graph_to_json(phi.domain());
  j["codomain"] = graph_to_json(phi.codomain());
  j["vertex_map"] = phi.vertex_map();
  j["edge_map"] = phi.edge_map();
  return j;
}

RightResolver resolver_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("resolver JSON must be an object");
  for (const char* key : {"domain", "codomain", "vertex_map", "edge_map"}) {
    if (!j.contains(key)) throw Error(std::string("resolver JSON is missing ") + key);
  }
  std::vector<Vertex> vmap;
  std::vector<EdgeId> emap;
  for (const auto& v : j["vertex_map"]) vmap.push_back(static_cast<Vertex>(index_of(v, "vertex_map")));
  for (const auto& e : j["edge_map"]) emap.push_back(static_cast<EdgeId>(index_of(e, "edge_map")));
  return RightResolver::validate(graph_from(j["domain"]), graph_from(j["codomain"]), std::move(vmap),
                                 std::move(emap));
}

RightResolver read_resolver(std::string_view text) {
  try {
    return resolver_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed resolver JSON: ") + e.what());
  }
}

std::string write_resolver(const RightResolver& phi) { return resolver_to_json(phi).dump(); }

Json partition_to_json(const VertexPartition& p) { return Json(p.labels()); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
}

}  // namespace bunchy
