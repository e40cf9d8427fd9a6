#include "agentsim/routing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "agentsim/error.hpp"

namespace agentsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d + w matches `target` up to accumulated rounding.
bool on_shortest(double d, double w, double target) {
  return d + w <= target + 1e-12 * std::max(1.0, target);
}

}  // namespace

Route DijkstraPathfinder::shortest_path(const RoadGraph& graph, VertexId src,
                                        VertexId dst) const {
  const std::size_t n = graph.vertex_count();
  if (src >= n || dst >= n) throw Error("shortest_path: vertex out of range");
  if (src == dst) return Route{{src}, 0.0};

  // Distances to dst, settled in (distance, id) order; stop once src is
  // settled. Every vertex on a shortest src-dst route is then final.
  std::vector<double> dist(n, kInf);
  std::vector<std::uint8_t> settled(n, 0);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[dst] = 0.0;
  pq.push({0.0, dst});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == src) break;
    for (const auto& nb : graph.neighbors(u)) {
      const double nd = d + nb.meters;
      if (!settled[nb.to] && nd < dist[nb.to]) {
        dist[nb.to] = nd;
        pq.push({nd, nb.to});
      }
    }
  }
  if (!settled[src]) throw NoRouteError(src, dst);

  // Walk forward from src, always taking the smallest-id neighbor that
  // stays on some shortest route. Neighbors are sorted by id.
  Route route;
  route.vertices.push_back(src);
  VertexId u = src;
  while (u != dst) {
    VertexId next = n;
    for (const auto& nb : graph.neighbors(u)) {
      if (settled[nb.to] && dist[nb.to] < dist[u] &&
          on_shortest(dist[nb.to], nb.meters, dist[u])) {
        next = nb.to;
        break;
      }
    }
    if (next == n) throw Error("shortest_path: inconsistent distance labels");
    route.total_length_m += *graph.weight(u, next);
    route.vertices.push_back(next);
    u = next;
  }
  return route;
}

Route shortest_path(const RoadGraph& graph, VertexId src, VertexId dst) {
  static const DijkstraPathfinder dijkstra;
  return dijkstra.shortest_path(graph, src, dst);
}

double route_length(const RoadGraph& graph, std::span<const VertexId> path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] >= graph.vertex_count() || path[i + 1] >= graph.vertex_count()) {
      throw Error("route_length: vertex out of range at index " +
                  std::to_string(i));
    }
    auto w = graph.weight(path[i], path[i + 1]);
    if (!w) {
      throw Error("route_length: vertices " + std::to_string(path[i]) +
                  " and " + std::to_string(path[i + 1]) +
                  " are not adjacent (index " + std::to_string(i) + ")");
    }
    total += *w;
  }
  return total;
}

}  // namespace agentsim
