#include "agentsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "agentsim/error.hpp"
#include "agentsim/text.hpp"

namespace agentsim {

TrackSummary summarize(const Track& t) {
  return {t.agent_id,       t.event_index, t.origin,
          t.destination,    t.speed_mps,   t.frame_period_s,
          t.length_m,       t.duration_min,
          t.points.empty() ? 0.0 : t.points.front().t_s,
          t.points.size()};
}

VelocityAndLength track_velocity_and_length(
    std::span<const TrackSummary> tracks) {
  VelocityAndLength out;
  out.velocity_mps.reserve(tracks.size());
  out.length_m.reserve(tracks.size());
  for (const auto& t : tracks) {
    out.velocity_mps.push_back(t.speed_mps);
    out.length_m.push_back(t.length_m);
  }
  return out;
}

VelocityAndLength track_velocity_and_length(std::span<const Track> tracks) {
  VelocityAndLength out;
  for (const auto& t : tracks) {
    out.velocity_mps.push_back(t.speed_mps);
    out.length_m.push_back(t.length_m);
  }
  return out;
}

// _____________________________________________________________________________
std::uint64_t HeatmapGrid::total_inside() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

HeatmapAccumulator::HeatmapAccumulator(BoundingBox bbox, std::size_t rows,
                                       std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error("heatmap: rows and cols must be >= 1");
  if (!(bbox.max_lat > bbox.min_lat) || !(bbox.max_lon > bbox.min_lon)) {
    throw Error("heatmap: bounding box is empty");
  }
  grid_.bbox = bbox;
  grid_.rows = rows;
  grid_.cols = cols;
  grid_.counts.assign(rows * cols, 0);
}

void HeatmapAccumulator::add(const GeoPoint& p) {
  const auto& b = grid_.bbox;
  if (p.lat < b.min_lat || p.lat > b.max_lat || p.lon < b.min_lon ||
      p.lon > b.max_lon) {
    ++grid_.out_of_box;
    return;
  }
  auto cell = [](double v, double lo, double hi, std::size_t n) {
    const auto i = static_cast<std::size_t>((v - lo) / (hi - lo) *
                                            static_cast<double>(n));
    return std::min(i, n - 1);
  };
  const std::size_t r = cell(p.lat, b.min_lat, b.max_lat, grid_.rows);
  const std::size_t c = cell(p.lon, b.min_lon, b.max_lon, grid_.cols);
  ++grid_.counts[r * grid_.cols + c];
}

HeatmapGrid density_heatmap(std::span<const Track> tracks, std::size_t rows,
                            std::size_t cols, const BoundingBox& bbox) {
  HeatmapAccumulator acc(bbox, rows, cols);
  for (const auto& t : tracks) {
    for (const auto& p : t.points) acc.add(p.observed);
  }
  return acc.grid();
}

// _____________________________________________________________________________
AgentStats agent_location_stats(std::span<const EventRecord> events,
                                std::size_t agent_id, std::size_t num_roles) {
  AgentStats stats;
  stats.agent_id = agent_id;
  stats.per_role.resize(num_roles);
  std::vector<std::set<std::size_t>> seen(num_roles);
  for (const auto& ev : events) {
    if (ev.dropped) continue;
    if (ev.role >= num_roles) throw Error("agent_location_stats: bad role");
    ++stats.per_role[ev.role].total;
    seen[ev.role].insert(ev.action);
  }
  for (std::size_t r = 0; r < num_roles; ++r) {
    stats.per_role[r].distinct = seen[r].size();
  }
  return stats;
}

PopulationStats population_stats(
    const std::vector<std::vector<EventRecord>>& per_agent,
    std::size_t num_roles) {
  PopulationStats out;
  out.mean_distinct.assign(num_roles, 0.0);
  out.mean_total.assign(num_roles, 0.0);
  for (std::size_t i = 0; i < per_agent.size(); ++i) {
    out.agents.push_back(agent_location_stats(per_agent[i], i, num_roles));
    for (std::size_t r = 0; r < num_roles; ++r) {
      out.mean_distinct[r] +=
          static_cast<double>(out.agents.back().per_role[r].distinct);
      out.mean_total[r] +=
          static_cast<double>(out.agents.back().per_role[r].total);
    }
  }
  if (!per_agent.empty()) {
    const auto n = static_cast<double>(per_agent.size());
    for (std::size_t r = 0; r < num_roles; ++r) {
      out.mean_distinct[r] /= n;
      out.mean_total[r] /= n;
    }
  }
  return out;
}

// _____________________________________________________________________________
std::vector<SeriesSegment> spatiotemporal_series(
    const std::vector<std::vector<EventRecord>>& per_agent,
    std::size_t agent_id, double total_time_min, long long initial_action) {
  if (agent_id >= per_agent.size()) {
    throw Error("spatiotemporal_series: unknown agent " +
                std::to_string(agent_id));
  }
  std::vector<SeriesSegment> out;
  double clock = 0.0;
  long long here = initial_action;
  long long here_role = kUnknownAction;
  for (const auto& ev : per_agent[agent_id]) {
    if (ev.dropped) continue;
    if (ev.time_min > clock) {
      out.push_back({clock, ev.time_min, here, here_role, false});
    }
    const double arrive = ev.time_min + ev.duration_min;
    if (ev.duration_min > 0.0) {
      out.push_back({ev.time_min, arrive, static_cast<long long>(ev.action),
                     static_cast<long long>(ev.role), true});
    }
    clock = std::max(clock, arrive);
    here = static_cast<long long>(ev.action);
    here_role = static_cast<long long>(ev.role);
  }
  if (total_time_min > clock || out.empty()) {
    out.push_back({clock, std::max(clock, total_time_min), here, here_role,
                   false});
  }
  return out;
}

// _____________________________________________________________________________
DistributionComparison compare_distributions(const EmpiricalDistribution& a,
                                             const EmpiricalDistribution& b) {
  if (a.bin_edges() != b.bin_edges()) {
    throw Error("compare_distributions: distributions need common bin edges");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    l1 += std::abs(a.bin_mass()[i] - b.bin_mass()[i]);
  }
  return {std::min(1.0, 0.5 * l1), a.mean() - b.mean()};
}

DistributionComparison compare_samples(std::span<const double> a,
                                       std::span<const double> b,
                                       std::size_t nbins) {
  const auto edges = common_edges(a, b, nbins);
  return compare_distributions(histogram_on_edges(a, edges),
                               histogram_on_edges(b, edges));
}

// _____________________________________________________________________________
std::string histogram_csv(const EmpiricalDistribution& d) {
  std::string out = "edge_lo,edge_hi,mass\n";
  for (std::size_t i = 0; i < d.bins(); ++i) {
    out += format_double(d.bin_edges()[i]) + ',' +
           format_double(d.bin_edges()[i + 1]) + ',' +
           format_double(d.bin_mass()[i]) + '\n';
  }
  return out;
}

std::string heatmap_csv(const HeatmapGrid& grid) {
  const auto& b = grid.bbox;
  std::string out = "# bbox " + format_double(b.min_lat) + ',' +
                    format_double(b.min_lon) + ',' + format_double(b.max_lat) +
                    ',' + format_double(b.max_lon) +
                    " out_of_box=" + std::to_string(grid.out_of_box) + '\n';
  out += "row,col,count,log10_count_plus_1\n";
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const auto n = grid.at(r, c);
      out += std::to_string(r) + ',' + std::to_string(c) + ',' +
             std::to_string(n) + ',' +
             format_double(std::log10(static_cast<double>(n) + 1.0)) + '\n';
    }
  }
  return out;
}

std::string series_csv(std::size_t agent_id,
                       const std::vector<SeriesSegment>& series) {
  std::string out;
  for (const auto& s : series) {
    out += std::to_string(agent_id) + ',' + format_double(s.t_start_min) + ',' +
           format_double(s.t_end_min) + ',' + std::to_string(s.action) + ',' +
           std::to_string(s.role) + ',' + (s.traveling ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace agentsim
