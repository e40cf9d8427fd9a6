#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "agentsim/config.hpp"

namespace agentsim::testing {

// Path of a file under the repository's data/ directory.
std::string data_path(const std::string& relative);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// rows x cols street grid as an OSM document; node (i, j) has id
// 1 + i * cols + j and sits at (lat0 + i * step_deg, lon0 + j * step_deg).
struct GridCity {
  std::size_t rows = 10;
  std::size_t cols = 10;
  double lat0 = 33.3;
  double lon0 = 44.35;
  double step_deg = 0.0015;
};
std::string grid_osm(const GridCity& city);

// Labeled points on distinct grid intersections: counts[r] points of role r,
// spread over the grid by a seeded shuffle.
std::string grid_labels_csv(const GridCity& city,
                            const std::vector<std::size_t>& counts,
                            std::uint64_t seed);

// Shortest path length by enumerating every simple path (small graphs only).
// Returns +inf when dst is unreachable. weights[u][v] <= 0 means no edge.
double brute_force_shortest(const std::vector<std::vector<double>>& weights,
                            std::size_t src, std::size_t dst);

// Small activity config: one timespan per row of `x`, equal widths, blocks of
// `actions_per_role` actions.
SimulationConfig activity_config(std::size_t agents, double total_time_min,
                                 double rate_per_min, double normal_prob,
                                 std::vector<std::size_t> normal_counts,
                                 std::vector<std::vector<double>> x,
                                 std::vector<std::size_t> actions_per_role);

double mean(const std::vector<double>& v);
// Unbiased sample variance.
double variance(const std::vector<double>& v);

// Bytes of every regular file under `dir` keyed by relative path, skipping
// manifest.json (it carries wall-clock timings).
std::vector<std::pair<std::string, std::string>> directory_contents(
    const std::filesystem::path& dir);

}  // namespace agentsim::testing
