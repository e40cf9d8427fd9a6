#pragma once

#include <span>
#include <vector>

#include "agentsim/road_graph.hpp"

namespace agentsim {

struct Route {
  std::vector<VertexId> vertices;  // source first, destination last
  double total_length_m = 0.0;
};

// Strategy interface so other pathfinders can replace Dijkstra.
class Pathfinder {
 public:
  virtual ~Pathfinder() = default;
  // Throws NoRouteError when dst is unreachable.
  virtual Route shortest_path(const RoadGraph& graph, VertexId src,
                              VertexId dst) const = 0;
};

// Among all minimum-length routes returns the lexicographically smallest
// vertex sequence. Thread-safe; holds no state.
class DijkstraPathfinder final : public Pathfinder {
 public:
  Route shortest_path(const RoadGraph& graph, VertexId src,
                      VertexId dst) const override;
};

Route shortest_path(const RoadGraph& graph, VertexId src, VertexId dst);

// Sum of edge weights along `path`. Throws if a consecutive pair is not
// adjacent, naming the index of the first vertex of that pair.
double route_length(const RoadGraph& graph, std::span<const VertexId> path);

}  // namespace agentsim
