#include "agentsim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "agentsim/analytics.hpp"
#include "agentsim/error.hpp"
#include "agentsim/run_io.hpp"
#include "agentsim/text.hpp"

namespace agentsim {

namespace fs = std::filesystem;
using nlohmann::json;

// _____________________________________________________________________________
std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                  nullptr)) {
    throw Error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || !EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr)) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 init failed");
  }
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

// _____________________________________________________________________________
RoadGraph load_network(const std::string& osm_path, BuildStats* stats,
                       std::size_t* dropped_ways) {
  const OsmData osm = load_osm(osm_path);
  if (dropped_ways) *dropped_ways = osm.dropped_ways;
  return build_graph(osm, stats);
}

LocationAssignment load_labels(const RoadGraph& graph, const OsmData* osm,
                               const std::string& labels_spec,
                               const SimulationConfig& cfg,
                               std::uint64_t seed) {
  auto ends_with = [&](const char* suffix) {
    const std::string s(suffix);
    return labels_spec.size() >= s.size() &&
           labels_spec.compare(labels_spec.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".csv")) {
    const std::string text = read_file(labels_spec);
    if (text.rfind("action_id,vertex_id,role", 0) == 0) {
      auto stored = parse_assignment_csv(text, cfg.num_roles);
      for (VertexId v : stored.action_vertex) {
        if (v >= graph.vertex_count()) {
          throw FormatError("assignment: vertex " + std::to_string(v) +
                            " is not in the network");
        }
      }
      return stored;
    }
    const auto points = parse_labeled_points(text, cfg.role_names,
                                             cfg.num_roles);
    return label_direct(graph, points, cfg.num_roles);
  }
  if (!cfg.labeling_policy) {
    throw ConfigError("labeling_policy", ConfigError::npos,
                      "required for indirect labeling");
  }
  RandomStream stream = agent_stream(seed, 0, StreamPurpose::kLabeling);
  std::vector<Region> regions;
  if (ends_with(".grid")) {
    regions.emplace_back(parse_region_grid(read_file(labels_spec)));
  } else if (labels_spec.rfind("osm:", 0) == 0) {
    if (!osm) throw Error("labels: 'osm:' labeling needs the parsed map");
    for (auto& p : regions_from_osm(*osm, labels_spec.substr(4))) {
      regions.emplace_back(std::move(p));
    }
  } else {
    throw Error("labels: unrecognized input '" + labels_spec +
                "' (expected .csv, .grid or osm:<tag>)");
  }
  return label_indirect(graph, regions, *cfg.labeling_policy, cfg.num_roles,
                        stream);
}

World load_world(const std::string& osm_path, const std::string& labels_spec,
                 const SimulationConfig& cfg, std::uint64_t seed) {
  World world;
  const OsmData osm = load_osm(osm_path);
  world.dropped_ways = osm.dropped_ways;
  world.graph = build_graph(osm, &world.build_stats);
  world.assignment = load_labels(world.graph, &osm, labels_spec, cfg, seed);
  return world;
}

ValidatedConfig bind_assignment(SimulationConfig cfg,
                                const LocationAssignment& assignment) {
  if (assignment.num_roles != cfg.num_roles) {
    throw ConfigError("num_roles", ConfigError::npos,
                      "labels use a different number of roles");
  }
  auto membership = assignment.membership();
  if (cfg.action_membership.empty()) {
    cfg.action_membership = std::move(membership);
    cfg.num_actions = cfg.action_membership.size();
  } else if (cfg.action_membership != membership) {
    throw ConfigError("action_membership", ConfigError::npos,
                      "does not match the labeled locations (" +
                          std::to_string(assignment.num_actions()) +
                          " labeled actions)");
  }
  return validate_config(cfg);
}

// _____________________________________________________________________________
namespace {

long long initial_action(const AgentProfile& profile, const ValidatedConfig& cfg,
                         RandomStream& obs) {
  for (std::size_t a : profile.draw_order) {
    if (cfg.action_role(a) == cfg->home_role) return static_cast<long long>(a);
  }
  return static_cast<long long>(obs.uniform_index(cfg->num_actions));
}

}  // namespace

AgentRun run_agent(const ValidatedConfig& cfg, const World& world,
                   std::uint64_t seed, std::size_t agent_id,
                   const Pathfinder& pathfinder) {
  if (!cfg->sensor) {
    throw ConfigError("sensor", ConfigError::npos, "required for tracks");
  }
  if (world.assignment.num_actions() != cfg->num_actions) {
    throw Error("run_agent: assignment does not match config actions");
  }
  RandomStream activity = agent_stream(seed, agent_id, StreamPurpose::kActivity);
  RandomStream observation =
      agent_stream(seed, agent_id, StreamPurpose::kObservation);
  const AgentProfile profile = draw_normal_actions(cfg, agent_id, activity);

  AgentRun run;
  run.initial_action = initial_action(profile, cfg, observation);
  VertexId here = world.assignment.action_vertex[static_cast<std::size_t>(
      run.initial_action)];
  const SensorConfig& sensor = *cfg->sensor;
  DurationFn travel = [&](EventRecord& ev) {
    TrackOutcome out = generate_track(world.graph, world.assignment, ev, here,
                                      sensor, observation, pathfinder);
    if (out.track) {
      here = out.track->destination;
      run.tracks.push_back(std::move(*out.track));
    }
    return ev.duration_min;
  };
  run.events = simulate_agent(cfg, profile, travel, activity);
  return run;
}

AgentRun run_agent_activity_only(const ValidatedConfig& cfg, std::uint64_t seed,
                                 std::size_t agent_id) {
  RandomStream activity = agent_stream(seed, agent_id, StreamPurpose::kActivity);
  const AgentProfile profile = draw_normal_actions(cfg, agent_id, activity);
  AgentRun run;
  run.events = simulate_agent(cfg, profile, zero_duration, activity);
  return run;
}

void simulate_agents(const ValidatedConfig& cfg, const World* world,
                     std::uint64_t seed, std::size_t workers, std::size_t chunk,
                     const AgentSink& sink) {
  const DijkstraPathfinder dijkstra;
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t n = cfg->num_agents;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    std::vector<AgentRun> runs(end - begin);
    parallel_for(end - begin, workers, [&](std::size_t k) {
      const std::size_t id = begin + k;
      runs[k] = world ? run_agent(cfg, *world, seed, id, dijkstra)
                      : run_agent_activity_only(cfg, seed, id);
    });
    for (std::size_t k = 0; k < runs.size(); ++k) {
      sink(begin + k, std::move(runs[k]));
    }
  }
}

std::vector<AgentRun> simulate_in_memory(const ValidatedConfig& cfg,
                                         const World* world, std::uint64_t seed,
                                         std::size_t workers) {
  std::vector<AgentRun> out(cfg->num_agents);
  simulate_agents(cfg, world, seed, workers, 256,
                  [&](std::size_t id, AgentRun&& run) {
                    out[id] = std::move(run);
                  });
  return out;
}

// _____________________________________________________________________________
std::string manifest_json(const RunManifest& m) {
  json outputs = json::array();
  for (const auto& f : m.outputs) {
    outputs.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  json j{{"schema", "agentsim-manifest"},
         {"version", kRunFormatVersion},
         {"config_sha256", m.config_sha256},
         {"seed", m.seed},
         {"inputs_sha256", m.input_sha256},
         {"module_versions", m.module_versions},
         {"outputs", outputs},
         {"timings_s", m.timings_s},
         {"counts",
          {{"events", m.events},
           {"tracks", m.tracks},
           {"dropped_events", m.dropped_events}}}};
  return j.dump(2) + "\n";
}

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Removes everything it created unless disarmed.
class OutputGuard {
 public:
  explicit OutputGuard(const std::string& dir) : dir_(dir) {
    created_dir_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    if (fs::exists(dir_ / "analytics") && fs::is_empty(dir_ / "analytics", ec)) {
      fs::remove(dir_ / "analytics", ec);
    }
    if (created_dir_) fs::remove_all(dir_, ec);
  }
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;

  std::string path(const std::string& name) {
    written_.push_back(dir_ / name);
    return (dir_ / name).string();
  }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<fs::path> written_;
};

std::vector<ManifestFile> digest_outputs(const std::string& dir,
                                         std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  std::vector<ManifestFile> out;
  for (const auto& name : names) {
    const auto p = (fs::path(dir) / name).string();
    out.push_back({name, sha256_file(p), fs::file_size(p)});
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

json run_info(const ValidatedConfig& cfg, const World* world, bool trace,
              bool truth) {
  json j{{"schema", "agentsim-run-info"},
         {"version", kRunFormatVersion},
         {"num_agents", cfg->num_agents},
         {"num_roles", cfg->num_roles},
         {"num_actions", cfg->num_actions},
         {"total_time_min", cfg->total_time_min},
         {"seed", cfg->seed},
         {"trace", trace},
         {"truth", truth},
         {"has_tracks", world != nullptr}};
  if (world) {
    const auto b = world->graph.bounds();
    j["graph_bounds"] = {b.min_lat, b.min_lon, b.max_lat, b.max_lon};
    j["vertices"] = world->graph.vertex_count();
    j["edges"] = world->graph.edge_count();
    j["dropped_ways"] = world->dropped_ways;
    j["merged_vertices"] = world->build_stats.merged_vertices;
  }
  return j;
}

struct SimulationCounts {
  std::size_t events = 0;
  std::size_t tracks = 0;
  std::size_t dropped = 0;
};

// Writes events.ndjson, agents.csv and, with a world, tracks.csv and
// track_summary.csv.
SimulationCounts write_simulation(const ValidatedConfig& cfg, const World* world,
                                  const RunOptions& options,
                                  const std::string& provenance,
                                  OutputGuard& guard,
                                  std::vector<std::string>& names) {
  SimulationCounts counts;
  auto events_out = open_output(guard.path("events.ndjson"));
  names.push_back("events.ndjson");
  write_events_header(events_out, options.trace);
  std::ofstream tracks_out, summary_out;
  if (world) {
    tracks_out = open_output(guard.path("tracks.csv"));
    summary_out = open_output(guard.path("track_summary.csv"));
    names.push_back("tracks.csv");
    names.push_back("track_summary.csv");
    write_tracks_header(tracks_out, provenance, options.truth);
    write_track_summary_header(summary_out);
  }
  std::vector<long long> initial(cfg->num_agents, -1);
  simulate_agents(cfg, world, cfg->seed, options.workers, options.chunk_agents,
                  [&](std::size_t id, AgentRun&& run) {
                    initial[id] = run.initial_action;
                    for (const auto& ev : run.events) {
                      write_event(events_out, ev, options.trace);
                      counts.dropped += ev.dropped ? 1 : 0;
                    }
                    counts.events += run.events.size();
                    for (const auto& t : run.tracks) {
                      write_track_points(tracks_out, t, options.truth);
                      write_track_summary(summary_out, summarize(t));
                    }
                    counts.tracks += run.tracks.size();
                  });
  events_out.close();
  if (world) {
    tracks_out.close();
    summary_out.close();
  }
  if (!events_out || (world && (!tracks_out || !summary_out))) {
    throw Error("writing simulation output failed");
  }
  write_file(guard.path("agents.csv"), agents_csv(initial));
  names.push_back("agents.csv");
  return counts;
}

RunManifest finish_run(const std::string& out_dir, OutputGuard& guard,
                       std::vector<std::string> names, RunManifest manifest,
                       const RunOptions& options, Stopwatch& clock) {
  if (options.analyze) {
    for (const auto& f : analyze_run(out_dir)) {
      guard.path(f);
      names.push_back(f);
    }
    manifest.timings_s["analyze"] = clock.lap();
  }
  manifest.outputs = digest_outputs(out_dir, names);
  manifest.module_versions = {{"agentsim", kVersion},
                              {"events", "agentsim-events v1"},
                              {"tracks", "agentsim-tracks v1"},
                              {"track_summary", "agentsim-track-summary v1"}};
  write_file(guard.path("manifest.json"), manifest_json(manifest));
  guard.commit();
  return manifest;
}

}  // namespace

RunManifest run_pipeline(const std::string& config_path,
                         const std::string& osm_path,
                         const std::string& labels_spec,
                         std::optional<std::uint64_t> seed,
                         const std::string& out_dir, const RunOptions& options) {
  Stopwatch clock;
  RunManifest manifest;
  SimulationConfig raw = load_config(config_path);
  if (seed) raw.seed = *seed;
  manifest.seed = raw.seed;
  manifest.input_sha256["config"] = sha256_file(config_path);
  manifest.input_sha256["osm"] = sha256_file(osm_path);
  if (fs::is_regular_file(labels_spec)) {
    manifest.input_sha256["labels"] = sha256_file(labels_spec);
  }

  const World world = load_world(osm_path, labels_spec, raw, raw.seed);
  manifest.timings_s["network_and_labels"] = clock.lap();
  const ValidatedConfig cfg = bind_assignment(raw, world.assignment);
  if (!cfg->sensor) {
    throw ConfigError("sensor", ConfigError::npos, "required for tracks");
  }

  OutputGuard guard(out_dir);
  std::vector<std::string> names;
  const std::string config_text = serialize_config(cfg.get());
  manifest.config_sha256 = sha256_hex(config_text);
  write_file(guard.path("config.json"), config_text);
  write_file(guard.path("assignment.csv"), assignment_csv(world.assignment));
  write_file(guard.path("run_info.json"),
             run_info(cfg, &world, options.trace, options.truth).dump(2) + "\n");
  names.insert(names.end(), {"config.json", "assignment.csv", "run_info.json"});

  const std::string provenance = "seed=" + std::to_string(cfg->seed) +
                                 " config_sha256=" + manifest.config_sha256;
  const auto counts =
      write_simulation(cfg, &world, options, provenance, guard, names);
  manifest.events = counts.events;
  manifest.tracks = counts.tracks;
  manifest.dropped_events = counts.dropped;
  manifest.timings_s["simulate_and_tracks"] = clock.lap();
  return finish_run(out_dir, guard, std::move(names), std::move(manifest),
                    options, clock);
}

RunManifest run_activity(const std::string& config_path,
                         std::optional<std::uint64_t> seed,
                         const std::string& out_dir, const RunOptions& options) {
  Stopwatch clock;
  RunManifest manifest;
  SimulationConfig raw = load_config(config_path);
  if (seed) raw.seed = *seed;
  manifest.seed = raw.seed;
  manifest.input_sha256["config"] = sha256_file(config_path);
  const ValidatedConfig cfg = validate_config(raw);

  OutputGuard guard(out_dir);
  std::vector<std::string> names;
  const std::string config_text = serialize_config(cfg.get());
  manifest.config_sha256 = sha256_hex(config_text);
  write_file(guard.path("config.json"), config_text);
  write_file(guard.path("run_info.json"),
             run_info(cfg, nullptr, options.trace, false).dump(2) + "\n");
  names.insert(names.end(), {"config.json", "run_info.json"});
  const auto counts = write_simulation(cfg, nullptr, options, "", guard, names);
  manifest.events = counts.events;
  manifest.timings_s["simulate"] = clock.lap();
  return finish_run(out_dir, guard, std::move(names), std::move(manifest),
                    options, clock);
}

// _____________________________________________________________________________
namespace {

// Margin around the road network for the default heatmap box, as a fraction
// of its extent; keeps noisy fixes on the outermost roads inside.
constexpr double kHeatmapPad = 0.02;

json read_run_info(const fs::path& dir) {
  json j;
  try {
    j = json::parse(read_file((dir / "run_info.json").string()));
  } catch (const json::exception& e) {
    throw FormatError(std::string("run_info.json: ") + e.what());
  }
  if (j.value("schema", "") != "agentsim-run-info" ||
      j.value("version", 0) != kRunFormatVersion) {
    throw FormatError("run_info.json: unexpected schema or version");
  }
  return j;
}

std::vector<TrackSummary> read_summaries(const fs::path& dir) {
  std::ifstream in(dir / "track_summary.csv");
  if (!in) throw Error("missing " + (dir / "track_summary.csv").string());
  return read_track_summaries(in);
}

}  // namespace

std::vector<std::string> analyze_run(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const json info = read_run_info(dir);
  const SimulationConfig cfg =
      parse_config(read_file((dir / "config.json").string()));
  const auto num_agents = info.at("num_agents").get<std::size_t>();
  const auto num_roles = info.at("num_roles").get<std::size_t>();

  std::ifstream events_in(dir / "events.ndjson");
  if (!events_in) throw Error("missing events.ndjson in " + run_dir);
  const auto events = read_events(events_in, num_agents);
  const auto initial = read_agents_csv(read_file((dir / "agents.csv").string()));

  fs::create_directories(dir / "analytics");
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file((dir / "analytics" / name).string(), content);
    written.push_back("analytics/" + name);
  };

  const PopulationStats stats = population_stats(events, num_roles);
  emit("agent_stats.csv", agent_stats_csv(stats));
  emit("role_means.csv", role_means_csv(stats));

  std::string series = "agent_id,t_start_min,t_end_min,action,role,traveling\n";
  for (std::size_t a : cfg.analytics.series_agents) {
    if (a >= num_agents) continue;
    auto segments =
        spatiotemporal_series(events, a, cfg.total_time_min, initial.at(a));
    for (auto& seg : segments) {
      if (seg.role != kUnknownAction || seg.action < 0) continue;
      const auto& row =
          cfg.action_membership.at(static_cast<std::size_t>(seg.action));
      seg.role = std::find(row.begin(), row.end(), 1) - row.begin();
    }
    series += series_csv(a, segments);
  }
  emit("series.csv", series);

  if (info.value("has_tracks", false)) {
    const auto summaries = read_summaries(dir);
    if (!summaries.empty()) {
      const auto vl = track_velocity_and_length(summaries);
      emit("velocity_hist.csv",
           histogram_csv(histogram(vl.velocity_mps, cfg.analytics.histogram_bins)));
      emit("length_hist.csv",
           histogram_csv(histogram(vl.length_m, cfg.analytics.histogram_bins)));
    }
    BoundingBox bbox;
    if (cfg.analytics.heatmap_bbox) {
      bbox = *cfg.analytics.heatmap_bbox;
    } else {
      const auto b = info.at("graph_bounds").get<std::vector<double>>();
      const double pad_lat = std::max(kHeatmapPad * (b[2] - b[0]), 1e-6);
      const double pad_lon = std::max(kHeatmapPad * (b[3] - b[1]), 1e-6);
      bbox = {b[0] - pad_lat, b[1] - pad_lon, b[2] + pad_lat, b[3] + pad_lon};
    }
    HeatmapAccumulator heat(bbox, cfg.analytics.heatmap_rows,
                            cfg.analytics.heatmap_cols);
    std::ifstream tracks_in(dir / "tracks.csv");
    if (!tracks_in) throw Error("missing tracks.csv in " + run_dir);
    for_each_observation(tracks_in, [&](const GeoPoint& p) { heat.add(p); });
    emit("heatmap.csv", heatmap_csv(heat.grid()));
  }
  return written;
}

std::vector<RunComparison> compare_runs(const std::string& run_a,
                                        const std::string& run_b,
                                        std::size_t nbins) {
  const auto a = track_velocity_and_length(read_summaries(run_a));
  const auto b = track_velocity_and_length(read_summaries(run_b));
  if (a.velocity_mps.empty() || b.velocity_mps.empty()) {
    throw Error("compare: both runs need at least one track");
  }
  std::vector<RunComparison> out;
  auto v = compare_samples(a.velocity_mps, b.velocity_mps, nbins);
  out.push_back({"velocity_mps", v.tv_distance, v.mean_difference});
  auto l = compare_samples(a.length_m, b.length_m, nbins);
  out.push_back({"track_length_m", l.tv_distance, l.mean_difference});
  return out;
}

std::string comparison_csv(const std::vector<RunComparison>& rows) {
  std::string out = "metric,tv_distance,mean_difference\n";
  for (const auto& r : rows) {
    out += r.metric + ',' + format_double(r.tv_distance) + ',' +
           format_double(r.mean_difference) + '\n';
  }
  return out;
}

}  // namespace agentsim
