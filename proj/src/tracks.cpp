#include "agentsim/tracks.hpp"

#include <algorithm>
#include <cmath>

#include "agentsim/error.hpp"

namespace agentsim {

double sample_empirical(const EmpiricalDistribution& dist,
                        RandomStream& stream) {
  const std::size_t bin = stream.categorical(dist.bin_mass());
  const double lo = dist.bin_edges()[bin];
  const double hi = dist.bin_edges()[bin + 1];
  return lo + (hi - lo) * stream.uniform();
}

std::vector<TimedPoint> interpolate_route(const RoadGraph& graph,
                                          const Route& route, double speed_mps,
                                          double frame_period_s, double t0_s) {
  if (!(speed_mps > 0.0)) throw Error("interpolate_route: speed must be > 0");
  if (!(frame_period_s > 0.0)) {
    throw Error("interpolate_route: frame period must be > 0");
  }
  if (route.vertices.empty()) throw Error("interpolate_route: empty route");

  std::vector<TimedPoint> out;
  const GeoPoint start = graph.position(route.vertices.front());
  out.push_back({t0_s, start});
  if (route.vertices.size() == 1 || route.total_length_m <= 0.0) return out;

  const double step = speed_mps * frame_period_s;
  std::size_t seg = 0;
  double seg_start = 0.0;  // arc length at the start of segment `seg`
  double seg_len = *graph.weight(route.vertices[0], route.vertices[1]);
  for (std::size_t k = 1;; ++k) {
    const double s = step * static_cast<double>(k);
    if (s >= route.total_length_m) break;
    while (s > seg_start + seg_len && seg + 2 < route.vertices.size()) {
      seg_start += seg_len;
      ++seg;
      seg_len = *graph.weight(route.vertices[seg], route.vertices[seg + 1]);
    }
    const double f = std::clamp((s - seg_start) / seg_len, 0.0, 1.0);
    out.push_back({t0_s + frame_period_s * static_cast<double>(k),
                   intermediate_point(graph.position(route.vertices[seg]),
                                      graph.position(route.vertices[seg + 1]),
                                      f)});
  }
  out.push_back({t0_s + route.total_length_m / speed_mps,
                 graph.position(route.vertices.back())});
  return out;
}

std::vector<GeoPoint> add_noise(const std::vector<TimedPoint>& points,
                                double sigma_m, RandomStream& stream) {
  if (!(sigma_m >= 0.0)) throw Error("add_noise: sigma must be >= 0");
  std::vector<GeoPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (sigma_m == 0.0) {
      out.push_back(p.pos);
      continue;
    }
    const double east = stream.normal(0.0, sigma_m);
    const double north = stream.normal(0.0, sigma_m);
    out.push_back(offset_meters(p.pos, east, north));
  }
  return out;
}

namespace {

// Redraw from rho without `excluded`; nullopt if nothing else is eligible.
std::optional<std::size_t> redraw_action(const SparseMixture& mixture,
                                         std::size_t excluded,
                                         RandomStream& stream) {
  std::vector<double> weights;
  std::vector<std::size_t> ids;
  for (const auto& [a, w] : mixture) {
    if (a == excluded || w <= 0.0) continue;
    ids.push_back(a);
    weights.push_back(w);
  }
  if (ids.empty()) return std::nullopt;
  return ids[stream.categorical(weights)];
}

}  // namespace

TrackOutcome generate_track(const RoadGraph& graph,
                            const LocationAssignment& assignment,
                            EventRecord& event, VertexId origin,
                            const SensorConfig& sensor, RandomStream& stream,
                            const Pathfinder& pathfinder) {
  if (event.action >= assignment.num_actions()) {
    throw Error("generate_track: action " + std::to_string(event.action) +
                " has no location");
  }
  TrackOutcome outcome;
  std::optional<Route> route;
  try {
    route = pathfinder.shortest_path(
        graph, origin, assignment.action_vertex[event.action]);
  } catch (const NoRouteError&) {
    auto retry = redraw_action(event.action_mixture, event.action, stream);
    if (retry) {
      outcome.resampled = true;
      event.action = *retry;
      try {
        route = pathfinder.shortest_path(graph, origin,
                                         assignment.action_vertex[*retry]);
      } catch (const NoRouteError&) {
      }
    }
  }
  if (!route) {
    event.dropped = true;
    event.duration_min = 0.0;
    return outcome;
  }

  Track track;
  track.agent_id = event.agent_id;
  track.event_index = event.event_index;
  track.origin = origin;
  track.destination = route->vertices.back();
  track.speed_mps = sample_empirical(sensor.speed_mps, stream);
  track.frame_period_s = 1.0 / sample_empirical(sensor.frame_rate_hz, stream);
  track.length_m = route->total_length_m;
  track.duration_min = track.length_m / track.speed_mps / 60.0;

  const auto truth = interpolate_route(graph, *route, track.speed_mps,
                                       track.frame_period_s,
                                       event.time_min * 60.0);
  const auto observed = add_noise(truth, sensor.noise_sigma_m, stream);
  track.points.reserve(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    track.points.push_back({truth[i].t_s, observed[i], truth[i].pos});
  }
  event.duration_min = track.duration_min;
  outcome.track = std::move(track);
  return outcome;
}

}  // namespace agentsim
