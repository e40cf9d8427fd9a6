#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agentsim/config.hpp"
#include "agentsim/geo.hpp"
#include "agentsim/osm.hpp"

namespace agentsim {

using VertexId = std::size_t;

struct Vertex {
  GeoPoint pos;
  OsmId osm_id = 0;
  TagMap tags;
};

struct Neighbor {
  VertexId to = 0;
  double meters = 0.0;
};

struct EdgeSpec {
  VertexId u = 0;
  VertexId v = 0;
  double meters = 0.0;
};

// Undirected road graph with positive edge weights (segment length in
// meters). Adjacency lists are sorted by neighbor id. Immutable.
class RoadGraph {
 public:
  RoadGraph() = default;
  // Duplicate edges keep the first weight; self-loops are rejected.
  RoadGraph(std::vector<Vertex> vertices, std::span<const EdgeSpec> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return vertices_.empty(); }

  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const GeoPoint& position(VertexId v) const { return vertices_[v].pos; }
  std::span<const Neighbor> neighbors(VertexId v) const { return adjacency_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }

  // Weight of edge (u, v), or nullopt if not adjacent.
  std::optional<double> weight(VertexId u, VertexId v) const;

  BoundingBox bounds() const;

  // Vertex ids sorted by latitude, for nearest-vertex search.
  const std::vector<VertexId>& latitude_order() const { return lat_order_; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<VertexId> lat_order_;
  std::size_t edge_count_ = 0;
};

struct BuildStats {
  std::size_t road_ways = 0;
  std::size_t skipped_ways = 0;    // no highway tag
  std::size_t merged_vertices = 0;  // distinct node ids sharing coordinates
  std::size_t degenerate_segments = 0;  // zero-length, dropped
};

// One vertex per distinct road node (nodes with identical coordinates are
// merged), an edge between consecutive nodes of each highway way, weights
// are haversine lengths. Vertex ids follow first appearance in way order.
RoadGraph build_graph(const OsmData& osm, BuildStats* stats = nullptr);

// Vertex closest to p by haversine; ties go to the smallest id. Throws on an
// empty graph.
VertexId nearest_vertex(const RoadGraph& graph, const GeoPoint& p);

// CSV edge list "u,v,meters" with u < v.
std::string edge_list_csv(const RoadGraph& graph);

}  // namespace agentsim
