// agentsim command-line interface.
//
// Exit codes: 0 success, 1 pipeline or I/O failure, 2 usage error,
// 3 invalid config or input data.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "agentsim/analytics.hpp"
#include "agentsim/error.hpp"
#include "agentsim/osm.hpp"
#include "agentsim/pipeline.hpp"
#include "agentsim/run_io.hpp"
#include "agentsim/text.hpp"

namespace fs = std::filesystem;
using namespace agentsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidInput = 3;

struct Args {
  std::string config;
  std::string osm;
  std::string labels;
  std::optional<std::uint64_t> seed;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  bool trace = false;
  bool truth = false;
  std::size_t batch_seeds = 0;
  std::vector<std::string> runs;
  std::size_t bins = kDefaultHistogramBins;
};

RunOptions options_from(const Args& a, bool analyze) {
  RunOptions o;
  o.workers = a.workers;
  o.trace = a.trace;
  o.truth = a.truth;
  o.analyze = analyze;
  return o;
}

void report(const RunManifest& m, const std::string& dir) {
  std::cout << dir << ": seed " << m.seed << ", " << m.events << " events, "
            << m.tracks << " tracks, " << m.dropped_events << " dropped\n";
}

int cmd_build_network(const Args& a) {
  const OsmData osm = load_osm(a.osm);
  BuildStats stats;
  const RoadGraph g = build_graph(osm, &stats);
  fs::create_directories(a.out);
  std::string vertices = "vertex_id,osm_id,lat,lon\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& vx = g.vertex(v);
    vertices += std::to_string(v) + ',' + std::to_string(vx.osm_id) + ',' +
                format_double(vx.pos.lat) + ',' + format_double(vx.pos.lon) +
                '\n';
  }
  write_file((fs::path(a.out) / "vertices.csv").string(), vertices);
  write_file((fs::path(a.out) / "edges.csv").string(), edge_list_csv(g));
  std::cout << g.vertex_count() << " vertices, " << g.edge_count()
            << " edges, " << stats.road_ways << " road ways, "
            << stats.skipped_ways << " non-road ways, " << osm.dropped_ways
            << " ways with missing nodes, " << stats.merged_vertices
            << " merged nodes\n";
  return kExitOk;
}

int cmd_label(const Args& a) {
  SimulationConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  const World world = load_world(a.osm, a.labels, cfg, cfg.seed);
  fs::create_directories(a.out);
  write_file((fs::path(a.out) / "assignment.csv").string(),
             assignment_csv(world.assignment));
  const auto per_role = world.assignment.actions_per_role();
  std::cout << world.assignment.num_actions() << " locations:";
  for (std::size_t r = 0; r < per_role.size(); ++r) {
    std::cout << ' ' << (r < cfg.role_names.size() ? cfg.role_names[r]
                                                   : std::to_string(r))
              << '=' << per_role[r];
  }
  std::cout << '\n';
  return kExitOk;
}

void write_replication(const std::vector<std::pair<std::uint64_t, std::string>>& runs,
                       const std::string& out, std::size_t bins) {
  std::vector<std::vector<double>> velocity(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::ifstream in(fs::path(runs[i].second) / "track_summary.csv");
    velocity[i] = track_velocity_and_length(read_track_summaries(in)).velocity_mps;
  }
  std::string csv = "seed_a,seed_b,velocity_tv_distance,velocity_mean_difference\n";
  double sum = 0.0, lo = 1.0, hi = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      if (velocity[i].empty() || velocity[j].empty()) continue;
      const auto c = compare_samples(velocity[i], velocity[j], bins);
      csv += std::to_string(runs[i].first) + ',' +
             std::to_string(runs[j].first) + ',' +
             format_double(c.tv_distance) + ',' +
             format_double(c.mean_difference) + '\n';
      sum += c.tv_distance;
      lo = std::min(lo, c.tv_distance);
      hi = std::max(hi, c.tv_distance);
      ++pairs;
    }
  }
  write_file((fs::path(out) / "replication.csv").string(), csv);
  if (pairs > 0) {
    std::cout << pairs << " seed pairs: velocity TV min " << lo << ", mean "
              << sum / static_cast<double>(pairs) << ", max " << hi << '\n';
  }
}

int cmd_run(const Args& a, bool with_tracks, bool analyze) {
  auto one = [&](std::optional<std::uint64_t> seed, const std::string& dir) {
    const RunOptions o = options_from(a, analyze);
    return with_tracks
               ? run_pipeline(a.config, a.osm, a.labels, seed, dir, o)
               : run_activity(a.config, seed, dir, o);
  };
  if (a.batch_seeds == 0) {
    report(one(a.seed, a.out), a.out);
    return kExitOk;
  }
  const std::uint64_t base = a.seed ? *a.seed : load_config(a.config).seed;
  std::vector<std::pair<std::uint64_t, std::string>> runs;
  for (std::size_t k = 0; k < a.batch_seeds; ++k) {
    const std::uint64_t s = base + k;
    const std::string dir = (fs::path(a.out) / ("seed_" + std::to_string(s))).string();
    report(one(s, dir), dir);
    runs.emplace_back(s, dir);
  }
  if (with_tracks) write_replication(runs, a.out, a.bins);
  return kExitOk;
}

int cmd_analyze(const Args& a) {
  for (const auto& f : analyze_run(a.runs.at(0))) std::cout << f << '\n';
  return kExitOk;
}

int cmd_compare(const Args& a) {
  const std::string table = comparison_csv(compare_runs(a.runs.at(0), a.runs.at(1), a.bins));
  if (!a.out.empty()) write_file(a.out, table);
  std::cout << table;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based activity and GPS track simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Args a;

  auto seed_opt = [&](CLI::App* sub) {
    sub->add_option("--seed", a.seed, "Seed override (default: config seed)");
  };
  auto sim_opts = [&](CLI::App* sub) {
    sub->add_option("--config", a.config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
    seed_opt(sub);
    sub->add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", a.out, "Output directory")->required();
    sub->add_flag("--trace", a.trace, "Include role and action mixtures in events");
    sub->add_option("--batch-seeds", a.batch_seeds, "Run N consecutive seeds into seed_<s>/ subdirectories");
  };
  auto map_opts = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--osm", a.osm, "OpenStreetMap XML file")->check(CLI::ExistingFile);
    auto* l = sub->add_option("--labels", a.labels,
                              "Labeled points .csv, assignment.csv, region .grid, or osm:<tag>");
    if (required) {
      o->required();
      l->required();
    }
    return std::pair{o, l};
  };

  auto* build = app.add_subcommand("build-network", "Parse a map into a road graph edge list");
  build->add_option("--osm", a.osm, "OpenStreetMap XML file")->required()->check(CLI::ExistingFile);
  build->add_option("--out", a.out, "Output directory")->required();

  auto* label = app.add_subcommand("label", "Assign action locations to road vertices");
  label->add_option("--config", a.config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
  map_opts(label, true);
  seed_opt(label);
  label->add_option("--out", a.out, "Output directory")->required();

  auto* simulate = app.add_subcommand(
      "simulate", "Activity events; with --osm and --labels, fused with tracks");
  sim_opts(simulate);
  auto [sim_osm, sim_labels] = map_opts(simulate, false);
  sim_osm->needs(sim_labels);
  sim_labels->needs(sim_osm);
  simulate->add_flag("--truth", a.truth, "Include true positions in tracks");

  auto* tracks = app.add_subcommand("tracks", "Activity events fused with track synthesis");
  sim_opts(tracks);
  map_opts(tracks, true);
  tracks->add_flag("--truth", a.truth, "Include true positions in tracks");

  auto* run = app.add_subcommand("run", "Full pipeline: tracks plus analytics and manifest");
  sim_opts(run);
  map_opts(run, true);
  run->add_flag("--truth", a.truth, "Include true positions in tracks");
  run->add_option("--bins", a.bins, "Histogram bins for batch replication")->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "Recompute analytics of a stored run");
  analyze->add_option("run", a.runs, "Run directory")->required()->expected(1)->check(CLI::ExistingDirectory);

  auto* compare = app.add_subcommand("compare", "Compare velocity and length distributions of two runs");
  compare->add_option("runs", a.runs, "Two run directories")->required()->expected(2)->check(CLI::ExistingDirectory);
  compare->add_option("--bins", a.bins, "Histogram bins")->check(CLI::PositiveNumber);
  compare->add_option("--out", a.out, "Write the table to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build_network(a);
    if (*label) return cmd_label(a);
    if (*simulate) return cmd_run(a, !a.osm.empty(), false);
    if (*tracks) return cmd_run(a, true, false);
    if (*run) return cmd_run(a, true, true);
    if (*analyze) return cmd_analyze(a);
    if (*compare) return cmd_compare(a);
  } catch (const ConfigError& e) {
    std::cerr << "agentsim: invalid config: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ParseError& e) {
    std::cerr << "agentsim: invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const FormatError& e) {
    std::cerr << "agentsim: invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "agentsim: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
