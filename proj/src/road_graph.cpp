#include "agentsim/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <unordered_map>

#include "agentsim/error.hpp"
#include "agentsim/text.hpp"

namespace agentsim {

RoadGraph::RoadGraph(std::vector<Vertex> vertices,
                     std::span<const EdgeSpec> edges)
    : vertices_(std::move(vertices)), adjacency_(vertices_.size()) {
  for (const auto& e : edges) {
    if (e.u >= vertices_.size() || e.v >= vertices_.size()) {
      throw Error("RoadGraph: edge endpoint out of range");
    }
    if (e.u == e.v) throw Error("RoadGraph: self-loop");
    if (!(e.meters > 0.0) || !std::isfinite(e.meters)) {
      throw Error("RoadGraph: edge weight must be positive");
    }
    auto& from_u = adjacency_[e.u];
    const bool present =
        std::any_of(from_u.begin(), from_u.end(),
                    [&](const Neighbor& n) { return n.to == e.v; });
    if (present) continue;
    from_u.push_back({e.v, e.meters});
    adjacency_[e.v].push_back({e.u, e.meters});
    ++edge_count_;
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
  }
  lat_order_.resize(vertices_.size());
  for (VertexId v = 0; v < vertices_.size(); ++v) lat_order_[v] = v;
  std::sort(lat_order_.begin(), lat_order_.end(), [&](VertexId a, VertexId b) {
    const double la = vertices_[a].pos.lat, lb = vertices_[b].pos.lat;
    return la < lb || (la == lb && a < b);
  });
}

std::optional<double> RoadGraph::weight(VertexId u, VertexId v) const {
  const auto& list = adjacency_[u];
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Neighbor& n, VertexId id) { return n.to < id; });
  if (it == list.end() || it->to != v) return std::nullopt;
  return it->meters;
}

BoundingBox RoadGraph::bounds() const {
  if (vertices_.empty()) return {};
  BoundingBox b{90.0, 180.0, -90.0, -180.0};
  for (const auto& v : vertices_) {
    b.min_lat = std::min(b.min_lat, v.pos.lat);
    b.min_lon = std::min(b.min_lon, v.pos.lon);
    b.max_lat = std::max(b.max_lat, v.pos.lat);
    b.max_lon = std::max(b.max_lon, v.pos.lon);
  }
  return b;
}

// _____________________________________________________________________________
RoadGraph build_graph(const OsmData& osm, BuildStats* stats) {
  BuildStats local;
  std::unordered_map<OsmId, const OsmNode*> node_by_id;
  node_by_id.reserve(osm.nodes.size());
  for (const auto& n : osm.nodes) node_by_id.emplace(n.id, &n);

  std::vector<Vertex> vertices;
  std::unordered_map<OsmId, VertexId> vertex_of_node;
  std::map<std::pair<double, double>, VertexId> vertex_at;
  std::vector<EdgeSpec> edges;

  auto vertex_for = [&](OsmId id) {
    if (auto it = vertex_of_node.find(id); it != vertex_of_node.end()) {
      return it->second;
    }
    const OsmNode& node = *node_by_id.at(id);
    const auto key = std::make_pair(node.pos.lat, node.pos.lon);
    VertexId v;
    if (auto it = vertex_at.find(key); it != vertex_at.end()) {
      v = it->second;
      ++local.merged_vertices;
    } else {
      v = vertices.size();
      vertices.push_back({node.pos, node.id, node.tags});
      vertex_at.emplace(key, v);
    }
    vertex_of_node.emplace(id, v);
    return v;
  };

  for (const auto& way : osm.ways) {
    if (!way.tags.count("highway")) {
      ++local.skipped_ways;
      continue;
    }
    ++local.road_ways;
    std::optional<VertexId> prev;
    for (OsmId ref : way.node_refs) {
      const VertexId v = vertex_for(ref);
      if (prev && *prev != v) {
        const double m = haversine(vertices[*prev].pos, vertices[v].pos);
        if (m > 0.0) {
          edges.push_back({*prev, v, m});
        } else {
          ++local.degenerate_segments;
        }
      } else if (prev) {
        ++local.degenerate_segments;
      }
      prev = v;
    }
  }
  if (stats) *stats = local;
  return RoadGraph(std::move(vertices), edges);
}

// _____________________________________________________________________________
VertexId nearest_vertex(const RoadGraph& graph, const GeoPoint& p) {
  if (graph.empty()) throw Error("nearest_vertex: empty graph");
  constexpr double kDeg = std::numbers::pi / 180.0;
  const auto& order = graph.latitude_order();

  // Meridian distance R * |dlat| is a lower bound on the great-circle
  // distance, so scanning outward in latitude can stop once it exceeds the
  // best candidate.
  auto start = std::lower_bound(
      order.begin(), order.end(), p.lat,
      [&](VertexId v, double lat) { return graph.position(v).lat < lat; });
  double best = std::numeric_limits<double>::infinity();
  VertexId best_id = 0;
  auto consider = [&](VertexId v) {
    const double d = haversine(graph.position(v), p);
    if (d < best || (d == best && v < best_id)) {
      best = d;
      best_id = v;
    }
  };
  auto beyond = [&](VertexId v) {
    const double bound = std::abs(graph.position(v).lat - p.lat) * kDeg *
                         kEarthRadiusM;
    return bound > best * (1.0 + 1e-12) + 1e-9;
  };
  auto up = start;
  auto down = start;
  while (up != order.end() || down != order.begin()) {
    bool progressed = false;
    if (up != order.end()) {
      if (beyond(*up)) {
        up = order.end();
      } else {
        consider(*up++);
        progressed = true;
      }
    }
    if (down != order.begin()) {
      if (beyond(*(down - 1))) {
        down = order.begin();
      } else {
        consider(*--down);
        progressed = true;
      }
    }
    if (!progressed && up == order.end() && down == order.begin()) break;
  }
  return best_id;
}

std::string edge_list_csv(const RoadGraph& graph) {
  std::string out = "u,v,meters\n";
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (const auto& n : graph.neighbors(u)) {
      if (n.to < u) continue;
      out += std::to_string(u);
      out += ',';
      out += std::to_string(n.to);
      out += ',';
      out += format_double(n.meters);
      out += '\n';
    }
  }
  return out;
}

}  // namespace agentsim
