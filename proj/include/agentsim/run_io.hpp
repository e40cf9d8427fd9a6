#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "agentsim/activity.hpp"
#include "agentsim/analytics.hpp"
#include "agentsim/tracks.hpp"

// Stored intermediate formats. Every file starts with a schema line naming
// the format and its version; readers reject anything else with
// FormatError.
namespace agentsim {

inline constexpr int kRunFormatVersion = 1;

// events.ndjson: header object, then one JSON object per event ordered by
// (agent_id, event_index). Mixtures are written only when `trace` is set.
void write_events_header(std::ostream& out, bool trace);
void write_event(std::ostream& out, const EventRecord& ev, bool trace);
// Groups events by agent; `num_agents` sizes the result.
std::vector<std::vector<EventRecord>> read_events(std::istream& in,
                                                  std::size_t num_agents);

// tracks.csv: one row per observation.
void write_tracks_header(std::ostream& out, const std::string& provenance,
                         bool truth);
void write_track_points(std::ostream& out, const Track& track, bool truth);

// Visits every observed point of a stored tracks.csv.
template <typename Fn>
void for_each_observation(std::istream& in, Fn&& fn);
std::vector<GeoPoint> read_observations(std::istream& in);

// track_summary.csv: one row per track.
void write_track_summary_header(std::ostream& out);
void write_track_summary(std::ostream& out, const TrackSummary& t);
std::vector<TrackSummary> read_track_summaries(std::istream& in);

// agents.csv: agent_id,initial_action (-1 when unknown).
std::string agents_csv(const std::vector<long long>& initial_actions);
std::vector<long long> read_agents_csv(const std::string& text);

// agent_stats.csv: agent,role,distinct,total
std::string agent_stats_csv(const PopulationStats& stats);
// role_means.csv: role,mean_distinct,mean_total
std::string role_means_csv(const PopulationStats& stats);

// Low-level helper shared by the readers.
void expect_schema_line(const std::string& line, const std::string& schema);

}  // namespace agentsim

#include <istream>

#include "agentsim/error.hpp"
#include "agentsim/text.hpp"

namespace agentsim {

template <typename Fn>
void for_each_observation(std::istream& in, Fn&& fn) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("tracks: empty file");
  expect_schema_line(line, "agentsim-tracks");
  if (!std::getline(in, line) || line.rfind("agent_id,", 0) != 0) {
    throw FormatError("tracks: missing column header");
  }
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 5 && f.size() != 7) {
      throw ParseError("tracks: unexpected field count", line_no);
    }
    fn(GeoPoint{parse_double(f[3]), parse_double(f[4])});
  }
}

}  // namespace agentsim
