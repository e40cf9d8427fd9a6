#include <doctest.h>

#include <cmath>

#include "agentsim/error.hpp"
#include "agentsim/tracks.hpp"
#include "support.hpp"

using namespace agentsim;
using agentsim::testing::mean;
using agentsim::testing::variance;

namespace {

// Path 0-1-2 plus an isolated vertex 3.
RoadGraph line_graph() {
  std::vector<Vertex> vs(4);
  vs[0].pos = {10.0, 20.0};
  vs[1].pos = {10.0, 20.01};
  vs[2].pos = {10.01, 20.01};
  vs[3].pos = {11.0, 21.0};
  const std::vector<EdgeSpec> e{{0, 1, haversine(vs[0].pos, vs[1].pos)},
                                {1, 2, haversine(vs[1].pos, vs[2].pos)}};
  return RoadGraph(vs, e);
}

SensorConfig fixed_sensor(double speed, double hz, double sigma) {
  return {EmpiricalDistribution({speed, speed * (1 + 1e-12)}, {1.0}),
          EmpiricalDistribution({hz, hz * (1 + 1e-12)}, {1.0}), sigma};
}

}  // namespace

TEST_SUITE("tracks") {

TEST_CASE("empirical sampling stays in the support and follows the masses") {
  EmpiricalDistribution d({0, 1, 3}, {0.25, 0.75});
  auto s = agent_stream(1, 0, StreamPurpose::kObservation);
  int low = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_empirical(d, s);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 3.0);
    low += x < 1.0;
  }
  CHECK(low / double(n) == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("interpolation spacing, timing and endpoints") {
  const auto g = line_graph();
  const Route r = shortest_path(g, 0, 2);
  const double speed = 13.0, period = 2.0;
  const auto pts = interpolate_route(g, r, speed, period, 100.0);
  REQUIRE(pts.size() >= 3);
  CHECK(pts.front().pos == g.position(0));
  CHECK(pts.back().pos == g.position(2));
  CHECK(pts.back().t_s == doctest::Approx(100.0 + r.total_length_m / speed));
  const double step = speed * period;
  CHECK(pts.size() == static_cast<std::size_t>(std::ceil(r.total_length_m / step)) + 1);
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    CHECK(pts[k].t_s == doctest::Approx(100.0 + period * k));
  }
  // Consecutive frames within a segment are one step apart on the ground.
  const double seg0 = *g.weight(0, 1);
  for (std::size_t k = 1; k < pts.size() - 1; ++k) {
    if (step * (k + 1) <= seg0) {
      CHECK(haversine(pts[k].pos, pts[k + 1].pos) == doctest::Approx(step).epsilon(1e-6));
    }
  }
}

TEST_CASE("interpolation argument checks") {
  const auto g = line_graph();
  const Route r = shortest_path(g, 0, 1);
  CHECK_THROWS_AS(interpolate_route(g, r, 0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(interpolate_route(g, r, 1.0, 0.0, 0.0), Error);
  CHECK(interpolate_route(g, Route{{1}, 0.0}, 5.0, 1.0, 7.0).size() == 1);
}

TEST_CASE("noise has the configured per-axis spread") {
  std::vector<TimedPoint> pts(40000, TimedPoint{0.0, {33.3, 44.4}});
  auto s = agent_stream(2, 0, StreamPurpose::kObservation);
  const auto noisy = add_noise(pts, 3.0, s);
  std::vector<double> e(noisy.size()), n(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    local_offset_meters(pts[i].pos, noisy[i], e[i], n[i]);
  }
  CHECK(std::abs(mean(e)) < 0.05);
  CHECK(std::abs(mean(n)) < 0.05);
  CHECK(std::sqrt(variance(e)) == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::sqrt(variance(n)) == doctest::Approx(3.0).epsilon(0.02));
  const auto exact = add_noise(pts, 0.0, s);
  CHECK(exact[0] == pts[0].pos);
}

TEST_CASE("generate_track sets duration from the route") {
  const auto g = line_graph();
  LocationAssignment a;
  a.num_roles = 1;
  a.action_vertex = {2, 3};
  a.action_role = {0, 0};
  a.role_actions = {{0, 1}};
  EventRecord ev;
  ev.time_min = 30.0;
  ev.action = 0;
  ev.action_mixture = {{0, 0.5}, {1, 0.5}};
  auto s = agent_stream(3, 0, StreamPurpose::kObservation);
  const auto out = generate_track(g, a, ev, 0, fixed_sensor(10.0, 1.0, 0.0), s,
                                  DijkstraPathfinder{});
  REQUIRE(out.track);
  CHECK_FALSE(out.resampled);
  const Track& t = *out.track;
  CHECK(t.destination == 2);
  CHECK(t.length_m == doctest::Approx(*g.weight(0, 1) + *g.weight(1, 2)));
  CHECK(ev.duration_min == doctest::Approx(t.length_m / 10.0 / 60.0).epsilon(1e-9));
  CHECK(t.points.front().t_s == 30.0 * 60.0);
  CHECK(t.points.back().truth == g.position(2));
}

TEST_CASE("unreachable destination: one redraw, then drop") {
  const auto g = line_graph();
  LocationAssignment a;
  a.num_roles = 1;
  a.action_vertex = {3, 1, 3};
  a.action_role = {0, 0, 0};
  a.role_actions = {{0, 1, 2}};
  const auto sensor = fixed_sensor(10.0, 1.0, 0.0);
  const DijkstraPathfinder dijkstra;
  auto s = agent_stream(4, 0, StreamPurpose::kObservation);

  EventRecord ok;
  ok.action = 0;
  ok.action_mixture = {{0, 0.6}, {1, 0.4}};
  const auto redrawn = generate_track(g, a, ok, 0, sensor, s, dijkstra);
  CHECK(redrawn.resampled);
  REQUIRE(redrawn.track);
  CHECK(ok.action == 1);
  CHECK_FALSE(ok.dropped);

  EventRecord lost;
  lost.action = 0;
  lost.action_mixture = {{0, 0.5}, {2, 0.5}};
  const auto dropped = generate_track(g, a, lost, 0, sensor, s, dijkstra);
  CHECK_FALSE(dropped.track);
  CHECK(lost.dropped);
  CHECK(lost.duration_min == 0.0);

  EventRecord alone;
  alone.action = 0;
  alone.action_mixture = {{0, 1.0}};
  CHECK_FALSE(generate_track(g, a, alone, 0, sensor, s, dijkstra).track);
  CHECK(alone.dropped);
}

}
