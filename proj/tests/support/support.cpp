#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "agentsim/text.hpp"

namespace agentsim::testing {

namespace fs = std::filesystem;

std::string data_path(const std::string& relative) {
  return (fs::path(AGENTSIM_DATA_DIR) / relative).string();
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() /
            ("agentsim-test-" + std::to_string(rd()) + "-" +
             std::to_string(counter++));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string grid_osm(const GridCity& c) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\">\n";
  auto id = [&](std::size_t i, std::size_t j) { return 1 + i * c.cols + j; };
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      out << "  <node id=\"" << id(i, j) << "\" lat=\""
          << format_double(c.lat0 + static_cast<double>(i) * c.step_deg)
          << "\" lon=\""
          << format_double(c.lon0 + static_cast<double>(j) * c.step_deg)
          << "\"/>\n";
    }
  }
  std::size_t way = 1;
  for (std::size_t i = 0; i < c.rows; ++i) {
    out << "  <way id=\"" << way++ << "\">\n";
    for (std::size_t j = 0; j < c.cols; ++j) {
      out << "    <nd ref=\"" << id(i, j) << "\"/>\n";
    }
    out << "    <tag k=\"highway\" v=\"residential\"/>\n  </way>\n";
  }
  for (std::size_t j = 0; j < c.cols; ++j) {
    out << "  <way id=\"" << way++ << "\">\n";
    for (std::size_t i = 0; i < c.rows; ++i) {
      out << "    <nd ref=\"" << id(i, j) << "\"/>\n";
    }
    out << "    <tag k=\"highway\" v=\"residential\"/>\n  </way>\n";
  }
  out << "</osm>\n";
  return out.str();
}

std::string grid_labels_csv(const GridCity& c,
                            const std::vector<std::size_t>& counts,
                            std::uint64_t seed) {
  std::vector<std::size_t> cells(c.rows * c.cols);
  std::iota(cells.begin(), cells.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::string out = "lat,lon,role\n";
  std::size_t next = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    for (std::size_t k = 0; k < counts[r]; ++k) {
      const std::size_t cell = cells.at(next++);
      const double lat =
          c.lat0 + static_cast<double>(cell / c.cols) * c.step_deg;
      const double lon =
          c.lon0 + static_cast<double>(cell % c.cols) * c.step_deg;
      out += format_double(lat) + ',' + format_double(lon) + ',' +
             std::to_string(r) + '\n';
    }
  }
  return out;
}

double brute_force_shortest(const std::vector<std::vector<double>>& w,
                            std::size_t src, std::size_t dst) {
  const std::size_t n = w.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t u, double len) {
    if (u == dst) {
      best = std::min(best, len);
      return;
    }
    on_path[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (w[u][v] > 0.0 && !on_path[v]) walk(v, len + w[u][v]);
    }
    on_path[u] = false;
  };
  walk(src, 0.0);
  return best;
}

SimulationConfig activity_config(std::size_t agents, double total_time_min,
                                 double rate_per_min, double normal_prob,
                                 std::vector<std::size_t> normal_counts,
                                 std::vector<std::vector<double>> x,
                                 std::vector<std::size_t> actions_per_role) {
  SimulationConfig cfg;
  cfg.num_agents = agents;
  cfg.num_roles = actions_per_role.size();
  cfg.num_actions = std::accumulate(actions_per_role.begin(),
                                    actions_per_role.end(), std::size_t{0});
  cfg.total_time_min = total_time_min;
  cfg.event_rate_per_min = rate_per_min;
  cfg.normal_prob = normal_prob;
  cfg.normal_counts = std::move(normal_counts);
  const double width = kMinutesPerDay / static_cast<double>(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    cfg.timespans.push_back({width * static_cast<double>(t),
                             t + 1 == x.size() ? kMinutesPerDay
                                               : width * static_cast<double>(t + 1)});
  }
  cfg.role_concentration = std::move(x);
  cfg.action_membership = block_membership(actions_per_role);
  cfg.seed = 42;
  return cfg;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

std::vector<std::pair<std::string, std::string>> directory_contents(
    const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir).generic_string();
    if (rel == "manifest.json") continue;
    out.emplace_back(rel, read_file(entry.path().string()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace agentsim::testing
