#include <doctest.h>

#include <sstream>

#include "agentsim/analytics.hpp"
#include "agentsim/error.hpp"
#include "agentsim/run_io.hpp"

using namespace agentsim;

namespace {

EventRecord sample_event(std::size_t agent, std::size_t idx) {
  EventRecord ev;
  ev.agent_id = agent;
  ev.event_index = idx;
  ev.time_min = 0.1 + 1.0 / 3.0 + static_cast<double>(idx);
  ev.timespan = 1;
  ev.role = 2;
  ev.role_mixture = {0.1, 0.2, 0.7000000000000001};
  ev.is_normal = true;
  ev.action_mixture = {{3, 1.0 / 7.0}, {9, 6.0 / 7.0}};
  ev.action = 9;
  ev.duration_min = 2.5e-7;
  ev.fallback = idx % 2 == 1;
  ev.dropped = idx == 2;
  return ev;
}

}  // namespace

TEST_SUITE("run_io") {

TEST_CASE("events round-trip exactly with trace") {
  std::stringstream io;
  write_events_header(io, true);
  std::vector<std::vector<EventRecord>> expected(3);
  for (std::size_t a : {0u, 2u}) {
    for (std::size_t k = 0; k < 3; ++k) {
      expected[a].push_back(sample_event(a, k));
      write_event(io, expected[a].back(), true);
    }
  }
  CHECK(read_events(io, 3) == expected);
}

TEST_CASE("events without trace drop the mixtures") {
  std::stringstream io;
  write_events_header(io, false);
  write_event(io, sample_event(0, 0), false);
  const auto back = read_events(io, 1);
  auto expected = sample_event(0, 0);
  expected.role_mixture.clear();
  expected.action_mixture.clear();
  CHECK(back[0][0] == expected);
}

TEST_CASE("events schema and ordering checks") {
  std::stringstream wrong("{\"schema\":\"agentsim-events\",\"version\":2}\n");
  CHECK_THROWS_AS(read_events(wrong, 1), FormatError);
  std::stringstream other("{\"schema\":\"something\",\"version\":1}\n");
  CHECK_THROWS_AS(read_events(other, 1), FormatError);
  std::stringstream empty;
  CHECK_THROWS_AS(read_events(empty, 1), FormatError);

  std::stringstream unordered;
  write_events_header(unordered, false);
  write_event(unordered, sample_event(0, 1), false);
  CHECK_THROWS(read_events(unordered, 1));

  std::stringstream out_of_range;
  write_events_header(out_of_range, false);
  write_event(out_of_range, sample_event(5, 0), false);
  CHECK_THROWS(read_events(out_of_range, 2));
}

TEST_CASE("tracks csv header and observations") {
  Track t;
  t.agent_id = 4;
  t.event_index = 1;
  t.points = {{10.5, {1.25, 2.5}, {1.0, 2.0}}, {11.5, {1.5, 2.75}, {1.5, 2.5}}};
  for (bool truth : {false, true}) {
    std::stringstream io;
    write_tracks_header(io, "seed=1", truth);
    write_track_points(io, t, truth);
    const std::string text = io.str();
    CHECK(text.rfind("# agentsim-tracks v1 seed=1\n", 0) == 0);
    CHECK((text.find("true_lat") != std::string::npos) == truth);
    std::stringstream in(text);
    const auto obs = read_observations(in);
    REQUIRE(obs.size() == 2);
    CHECK(obs[1] == GeoPoint{1.5, 2.75});
  }
  std::stringstream bad("# agentsim-tracks v9\nagent_id,event_index,t_s,lat,lon\n");
  CHECK_THROWS_AS(read_observations(bad), FormatError);
}

TEST_CASE("track summaries round-trip") {
  TrackSummary s{3, 7, 11, 12, 13.25, 0.6666666666666666, 1234.5, 1.5, 99.125, 42};
  std::stringstream io;
  write_track_summary_header(io);
  write_track_summary(io, s);
  const auto back = read_track_summaries(io);
  REQUIRE(back.size() == 1);
  CHECK(back[0].speed_mps == s.speed_mps);
  CHECK(back[0].frame_period_s == s.frame_period_s);
  CHECK(back[0].points == 42);
  CHECK(back[0].destination == 12);
}

TEST_CASE("agents csv round-trip") {
  const std::vector<long long> initial{3, -1, 0};
  CHECK(read_agents_csv(agents_csv(initial)) == initial);
  CHECK_THROWS_AS(read_agents_csv("agent_id,initial_action\n0,1\n"), FormatError);
}

TEST_CASE("stats csv") {
  PopulationStats p;
  p.agents = {{0, {{1, 2}, {3, 4}}}};
  p.mean_distinct = {1, 3};
  p.mean_total = {2, 4};
  CHECK(role_means_csv(p) == "role,mean_distinct,mean_total\n0,1,2\n1,3,4\n");
  CHECK(agent_stats_csv(p).find("0,1,3,4") != std::string::npos);
}

}
