#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "agentsim/activity.hpp"
#include "agentsim/config.hpp"
#include "agentsim/labels.hpp"
#include "agentsim/random.hpp"
#include "agentsim/routing.hpp"

namespace agentsim {

struct TimedPoint {
  double t_s = 0.0;  // seconds since simulation start
  GeoPoint pos;
};

struct TrackPoint {
  double t_s = 0.0;
  GeoPoint observed;
  GeoPoint truth;
};

struct Track {
  std::size_t agent_id = 0;
  std::size_t event_index = 0;
  VertexId origin = 0;
  VertexId destination = 0;
  double speed_mps = 0.0;
  double frame_period_s = 0.0;
  double length_m = 0.0;
  double duration_min = 0.0;
  std::vector<TrackPoint> points;
};

// Bin drawn by mass, value uniform within the bin.
double sample_empirical(const EmpiricalDistribution& dist, RandomStream& stream);

// Positions along the route at t0, t0 + period, ... moving at constant
// speed, plus the destination itself when the last frame falls short of it.
// Within a segment points follow the great circle.
std::vector<TimedPoint> interpolate_route(const RoadGraph& graph,
                                          const Route& route, double speed_mps,
                                          double frame_period_s, double t0_s);

// Independent N(0, sigma) offsets in meters along east and north.
std::vector<GeoPoint> add_noise(const std::vector<TimedPoint>& points,
                                double sigma_m, RandomStream& stream);

struct TrackOutcome {
  std::optional<Track> track;  // empty when the event was dropped
  bool resampled = false;
};

// Routes origin -> the event's action vertex, samples speed and frame rate,
// interpolates and adds noise. Sets event.duration_min. On no route the
// destination is redrawn once from the event's action mixture without the
// unreachable action; if that fails too the event is marked dropped.
TrackOutcome generate_track(const RoadGraph& graph,
                            const LocationAssignment& assignment,
                            EventRecord& event, VertexId origin,
                            const SensorConfig& sensor, RandomStream& stream,
                            const Pathfinder& pathfinder);

}  // namespace agentsim
