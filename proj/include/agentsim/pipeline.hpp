#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/activity.hpp"
#include "agentsim/config.hpp"
#include "agentsim/labels.hpp"
#include "agentsim/road_graph.hpp"
#include "agentsim/routing.hpp"
#include "agentsim/tracks.hpp"

namespace agentsim {

inline constexpr const char* kVersion = "1.0.0";

// Road network plus labeled destinations.
struct World {
  RoadGraph graph;
  BuildStats build_stats;
  std::size_t dropped_ways = 0;
  LocationAssignment assignment;
};

RoadGraph load_network(const std::string& osm_path, BuildStats* stats = nullptr,
                       std::size_t* dropped_ways = nullptr);

// Labels by input kind: "*.csv" labeled points (direct) or a stored
// assignment.csv, "*.grid" region
// raster (indirect), "osm:<tag>" closed ways of the map carrying <tag>
// (indirect). Indirect labeling needs cfg.labeling_policy.
LocationAssignment load_labels(const RoadGraph& graph, const OsmData* osm,
                               const std::string& labels_spec,
                               const SimulationConfig& cfg, std::uint64_t seed);

World load_world(const std::string& osm_path, const std::string& labels_spec,
                 const SimulationConfig& cfg, std::uint64_t seed);

// Fills the action membership from the assignment when the config leaves it
// out; otherwise requires the two to agree. Then validates.
ValidatedConfig bind_assignment(SimulationConfig cfg,
                                const LocationAssignment& assignment);

struct AgentRun {
  std::vector<EventRecord> events;
  std::vector<Track> tracks;
  long long initial_action = -1;
};

// One agent with track feedback: each event's duration is the travel time of
// its track, so the next wait starts after arrival.
AgentRun run_agent(const ValidatedConfig& cfg, const World& world,
                   std::uint64_t seed, std::size_t agent_id,
                   const Pathfinder& pathfinder);

// Activity only; every event takes zero time.
AgentRun run_agent_activity_only(const ValidatedConfig& cfg, std::uint64_t seed,
                                 std::size_t agent_id);

using AgentSink = std::function<void(std::size_t agent_id, AgentRun&& run)>;

// Simulates every agent, `workers` at a time, in chunks of `chunk` agents,
// handing results to `sink` in agent-id order. With `world` null the run is
// activity-only.
void simulate_agents(const ValidatedConfig& cfg, const World* world,
                     std::uint64_t seed, std::size_t workers, std::size_t chunk,
                     const AgentSink& sink);

std::vector<AgentRun> simulate_in_memory(const ValidatedConfig& cfg,
                                         const World* world, std::uint64_t seed,
                                         std::size_t workers = 1);

struct RunOptions {
  std::size_t workers = 1;
  bool trace = false;
  bool truth = false;
  std::size_t chunk_agents = 64;
  bool analyze = true;
};

struct ManifestFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_sha256;
  std::map<std::string, std::string> module_versions;
  std::vector<ManifestFile> outputs;
  std::map<std::string, double> timings_s;
  std::size_t events = 0;
  std::size_t tracks = 0;
  std::size_t dropped_events = 0;
};

std::string manifest_json(const RunManifest& m);

// Full pipeline into `out_dir`: network, labels, fused activity + tracks,
// analytics, manifest. Files written before a failure are removed.
RunManifest run_pipeline(const std::string& config_path,
                         const std::string& osm_path,
                         const std::string& labels_spec,
                         std::optional<std::uint64_t> seed,
                         const std::string& out_dir, const RunOptions& options);

// Activity-only run into `out_dir` (events, agents, config echo).
RunManifest run_activity(const std::string& config_path,
                         std::optional<std::uint64_t> seed,
                         const std::string& out_dir, const RunOptions& options);

// Recomputes the analytics CSVs of a stored run from its files.
std::vector<std::string> analyze_run(const std::string& run_dir);

struct RunComparison {
  std::string metric;
  double tv_distance = 0.0;
  double mean_difference = 0.0;
};

// Velocity and track-length distributions of two stored runs on common bins.
std::vector<RunComparison> compare_runs(const std::string& run_a,
                                        const std::string& run_b,
                                        std::size_t nbins = kDefaultHistogramBins);
std::string comparison_csv(const std::vector<RunComparison>& rows);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

}  // namespace agentsim
