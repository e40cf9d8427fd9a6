#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agentsim/activity.hpp"
#include "agentsim/config.hpp"
#include "agentsim/distribution.hpp"
#include "agentsim/tracks.hpp"

namespace agentsim {

// Per-track values the analytics need; what track_summary.csv stores.
struct TrackSummary {
  std::size_t agent_id = 0;
  std::size_t event_index = 0;
  VertexId origin = 0;
  VertexId destination = 0;
  double speed_mps = 0.0;
  double frame_period_s = 0.0;
  double length_m = 0.0;
  double duration_min = 0.0;
  double start_s = 0.0;
  std::size_t points = 0;
};

TrackSummary summarize(const Track& track);

struct VelocityAndLength {
  std::vector<double> velocity_mps;
  std::vector<double> length_m;
};

VelocityAndLength track_velocity_and_length(std::span<const TrackSummary> tracks);
VelocityAndLength track_velocity_and_length(std::span<const Track> tracks);

// Raw counts; log10(count + 1) is applied only on export.
struct HeatmapGrid {
  BoundingBox bbox;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> counts;  // row-major, row 0 = southernmost
  std::uint64_t out_of_box = 0;

  std::uint64_t at(std::size_t r, std::size_t c) const {
    return counts[r * cols + c];
  }
  std::uint64_t total_inside() const;
};

// Incremental builder so large runs can be binned while streaming.
class HeatmapAccumulator {
 public:
  HeatmapAccumulator(BoundingBox bbox, std::size_t rows, std::size_t cols);
  void add(const GeoPoint& p);
  const HeatmapGrid& grid() const { return grid_; }

 private:
  HeatmapGrid grid_;
};

HeatmapGrid density_heatmap(std::span<const Track> tracks, std::size_t rows,
                            std::size_t cols, const BoundingBox& bbox);

struct RoleVisits {
  std::size_t distinct = 0;
  std::size_t total = 0;
};

struct AgentStats {
  std::size_t agent_id = 0;
  std::vector<RoleVisits> per_role;
};

struct PopulationStats {
  std::vector<AgentStats> agents;
  std::vector<double> mean_distinct;  // per role
  std::vector<double> mean_total;     // per role
};

// Dropped events are not visits.
AgentStats agent_location_stats(std::span<const EventRecord> events,
                                std::size_t agent_id, std::size_t num_roles);
PopulationStats population_stats(
    const std::vector<std::vector<EventRecord>>& per_agent,
    std::size_t num_roles);

inline constexpr long long kUnknownAction = -1;

struct SeriesSegment {
  double t_start_min = 0.0;
  double t_end_min = 0.0;
  long long action = kUnknownAction;  // destination while traveling
  long long role = kUnknownAction;
  bool traveling = false;
};

// Piecewise-constant location over [0, max(total_time, last arrival)]:
// a stay at the initial location, then per event a travel segment (when the
// duration is positive) and a stay at the destination.
std::vector<SeriesSegment> spatiotemporal_series(
    const std::vector<std::vector<EventRecord>>& per_agent,
    std::size_t agent_id, double total_time_min,
    long long initial_action = kUnknownAction);

struct DistributionComparison {
  double tv_distance = 0.0;
  double mean_difference = 0.0;  // mean(a) - mean(b)
};

// Both distributions must share bin edges.
DistributionComparison compare_distributions(const EmpiricalDistribution& a,
                                             const EmpiricalDistribution& b);

// Bins both samples on common edges, then compares.
DistributionComparison compare_samples(std::span<const double> a,
                                       std::span<const double> b,
                                       std::size_t nbins = kDefaultHistogramBins);

// CSV exports.
std::string histogram_csv(const EmpiricalDistribution& d);
std::string heatmap_csv(const HeatmapGrid& grid);
std::string series_csv(std::size_t agent_id,
                       const std::vector<SeriesSegment>& series);

}  // namespace agentsim
