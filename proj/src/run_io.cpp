#include "agentsim/run_io.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

namespace agentsim {

using nlohmann::json;

void expect_schema_line(const std::string& line, const std::string& schema) {
  const std::string prefix = "# " + schema + " v";
  if (line.rfind(prefix, 0) != 0) {
    throw FormatError("expected a '" + schema + "' file, got: " +
                      line.substr(0, 60));
  }
  const auto rest = line.substr(prefix.size());
  const auto version = parse_int(split(rest, ' ').front());
  if (version != kRunFormatVersion) {
    throw FormatError(schema + ": unsupported version " +
                      std::to_string(version));
  }
}

// _____________________________________________________________________________
void write_events_header(std::ostream& out, bool trace) {
  out << json{{"schema", "agentsim-events"},
              {"version", kRunFormatVersion},
              {"trace", trace}}
             .dump()
      << '\n';
}

void write_event(std::ostream& out, const EventRecord& ev, bool trace) {
  json j{{"agent_id", ev.agent_id},   {"event_index", ev.event_index},
         {"time_min", ev.time_min},   {"timespan", ev.timespan},
         {"role", ev.role},           {"is_normal", ev.is_normal},
         {"action", ev.action},       {"duration_min", ev.duration_min},
         {"fallback", ev.fallback},   {"dropped", ev.dropped}};
  if (trace) {
    j["role_mixture"] = ev.role_mixture;
    json rho = json::array();
    for (const auto& [a, w] : ev.action_mixture) rho.push_back({a, w});
    j["action_mixture"] = std::move(rho);
  }
  out << j.dump() << '\n';
}

std::vector<std::vector<EventRecord>> read_events(std::istream& in,
                                                  std::size_t num_agents) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("events: empty file");
  try {
    const json header = json::parse(line);
    if (header.value("schema", "") != "agentsim-events") {
      throw FormatError("events: not an agentsim-events file");
    }
    if (header.value("version", 0) != kRunFormatVersion) {
      throw FormatError("events: unsupported version");
    }
  } catch (const json::exception&) {
    throw FormatError("events: header is not JSON");
  }
  std::vector<std::vector<EventRecord>> out(num_agents);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      EventRecord ev;
      ev.agent_id = j.at("agent_id").get<std::size_t>();
      ev.event_index = j.at("event_index").get<std::size_t>();
      ev.time_min = j.at("time_min").get<double>();
      ev.timespan = j.at("timespan").get<std::size_t>();
      ev.role = j.at("role").get<std::size_t>();
      ev.is_normal = j.at("is_normal").get<bool>();
      ev.action = j.at("action").get<std::size_t>();
      ev.duration_min = j.at("duration_min").get<double>();
      ev.fallback = j.at("fallback").get<bool>();
      ev.dropped = j.at("dropped").get<bool>();
      if (j.contains("role_mixture")) {
        ev.role_mixture = j.at("role_mixture").get<std::vector<double>>();
      }
      if (j.contains("action_mixture")) {
        for (const auto& pair : j.at("action_mixture")) {
          ev.action_mixture.emplace_back(pair.at(0).get<std::size_t>(),
                                         pair.at(1).get<double>());
        }
      }
      if (ev.agent_id >= num_agents) {
        throw ParseError("events: agent id out of range", line_no);
      }
      if (ev.event_index != out[ev.agent_id].size()) {
        throw ParseError("events: event_index out of sequence", line_no);
      }
      out[ev.agent_id].push_back(std::move(ev));
    } catch (const json::exception& e) {
      throw ParseError(std::string("events: ") + e.what(), line_no);
    }
  }
  return out;
}

// _____________________________________________________________________________
void write_tracks_header(std::ostream& out, const std::string& provenance,
                         bool truth) {
  out << "# agentsim-tracks v" << kRunFormatVersion;
  if (!provenance.empty()) out << ' ' << provenance;
  out << '\n' << "agent_id,event_index,t_s,lat,lon";
  if (truth) out << ",true_lat,true_lon";
  out << '\n';
}

void write_track_points(std::ostream& out, const Track& track, bool truth) {
  std::string buf;
  for (const auto& p : track.points) {
    buf.clear();
    buf += std::to_string(track.agent_id);
    buf += ',';
    buf += std::to_string(track.event_index);
    buf += ',';
    buf += format_double(p.t_s);
    buf += ',';
    buf += format_double(p.observed.lat);
    buf += ',';
    buf += format_double(p.observed.lon);
    if (truth) {
      buf += ',';
      buf += format_double(p.truth.lat);
      buf += ',';
      buf += format_double(p.truth.lon);
    }
    buf += '\n';
    out << buf;
  }
}

std::vector<GeoPoint> read_observations(std::istream& in) {
  std::vector<GeoPoint> out;
  for_each_observation(in, [&](const GeoPoint& p) { out.push_back(p); });
  return out;
}

// _____________________________________________________________________________
void write_track_summary_header(std::ostream& out) {
  out << "# agentsim-track-summary v" << kRunFormatVersion << '\n'
      << "agent_id,event_index,origin,destination,speed_mps,frame_period_s,"
         "length_m,duration_min,start_s,points\n";
}

void write_track_summary(std::ostream& out, const TrackSummary& t) {
  out << t.agent_id << ',' << t.event_index << ',' << t.origin << ','
      << t.destination << ',' << format_double(t.speed_mps) << ','
      << format_double(t.frame_period_s) << ',' << format_double(t.length_m)
      << ',' << format_double(t.duration_min) << ','
      << format_double(t.start_s) << ',' << t.points << '\n';
}

std::vector<TrackSummary> read_track_summaries(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("track summary: empty file");
  expect_schema_line(line, "agentsim-track-summary");
  if (!std::getline(in, line) || line.rfind("agent_id,", 0) != 0) {
    throw FormatError("track summary: missing column header");
  }
  std::vector<TrackSummary> out;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) {
      throw ParseError("track summary: expected 10 fields", line_no);
    }
    TrackSummary t;
    t.agent_id = static_cast<std::size_t>(parse_int(f[0]));
    t.event_index = static_cast<std::size_t>(parse_int(f[1]));
    t.origin = static_cast<VertexId>(parse_int(f[2]));
    t.destination = static_cast<VertexId>(parse_int(f[3]));
    t.speed_mps = parse_double(f[4]);
    t.frame_period_s = parse_double(f[5]);
    t.length_m = parse_double(f[6]);
    t.duration_min = parse_double(f[7]);
    t.start_s = parse_double(f[8]);
    t.points = static_cast<std::size_t>(parse_int(f[9]));
    out.push_back(t);
  }
  return out;
}

// _____________________________________________________________________________
std::string agents_csv(const std::vector<long long>& initial_actions) {
  std::string out = "# agentsim-agents v" + std::to_string(kRunFormatVersion) +
                    "\nagent_id,initial_action\n";
  for (std::size_t i = 0; i < initial_actions.size(); ++i) {
    out += std::to_string(i) + ',' + std::to_string(initial_actions[i]) + '\n';
  }
  return out;
}

std::vector<long long> read_agents_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("agents: empty file");
  expect_schema_line(line, "agentsim-agents");
  std::getline(in, line);
  std::vector<long long> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 2 || parse_int(f[0]) != static_cast<long long>(out.size())) {
      throw ParseError("agents: malformed row " + std::to_string(out.size()));
    }
    out.push_back(parse_int(f[1]));
  }
  return out;
}

std::string agent_stats_csv(const PopulationStats& stats) {
  std::string out = "agent,role,distinct,total\n";
  for (const auto& a : stats.agents) {
    for (std::size_t r = 0; r < a.per_role.size(); ++r) {
      out += std::to_string(a.agent_id) + ',' + std::to_string(r) + ',' +
             std::to_string(a.per_role[r].distinct) + ',' +
             std::to_string(a.per_role[r].total) + '\n';
    }
  }
  return out;
}

std::string role_means_csv(const PopulationStats& stats) {
  std::string out = "role,mean_distinct,mean_total\n";
  for (std::size_t r = 0; r < stats.mean_distinct.size(); ++r) {
    out += std::to_string(r) + ',' + format_double(stats.mean_distinct[r]) +
           ',' + format_double(stats.mean_total[r]) + '\n';
  }
  return out;
}

}  // namespace agentsim
