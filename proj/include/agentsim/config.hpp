#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/distribution.hpp"

namespace agentsim {

inline constexpr double kMinutesPerDay = 1440.0;

// Half-open interval [begin_min, end_min) of the diurnal cycle.
struct Timespan {
  double begin_min = 0.0;
  double end_min = 0.0;
  friend bool operator==(const Timespan&, const Timespan&) = default;
};

struct SensorConfig {
  EmpiricalDistribution speed_mps;
  EmpiricalDistribution frame_rate_hz;
  double noise_sigma_m = 0.0;
  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

// South-west / north-east corners in degrees.
struct BoundingBox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct AnalyticsConfig {
  std::size_t histogram_bins = kDefaultHistogramBins;
  std::size_t heatmap_rows = 64;
  std::size_t heatmap_cols = 64;
  std::optional<BoundingBox> heatmap_bbox;
  // Agents whose spatio-temporal series is exported.
  std::vector<std::size_t> series_agents{0};
  friend bool operator==(const AnalyticsConfig&,
                         const AnalyticsConfig&) = default;
};

// Region code -> per-role probability vector used by indirect labeling.
using LabelingPolicy = std::map<std::string, std::vector<double>>;

// Population-level parameters of the activity model plus the observational
// settings. Times are minutes, rates are per minute.
struct SimulationConfig {
  std::size_t num_agents = 0;
  std::size_t num_roles = 0;
  std::size_t num_actions = 0;
  double total_time_min = 0.0;
  // Events per minute; an agent expects event_rate_per_min * total_time_min
  // events when actions take no time.
  double event_rate_per_min = 0.0;
  double normal_prob = 0.0;
  std::vector<std::size_t> normal_counts;               // length R
  std::vector<std::vector<double>> role_concentration;  // T x R
  std::vector<std::vector<std::uint8_t>> action_membership;  // A x R
  std::vector<Timespan> timespans;                      // length T
  std::uint64_t seed = 0;

  std::vector<std::string> role_names;  // empty or length R
  std::size_t home_role = 0;
  std::optional<SensorConfig> sensor;
  std::optional<LabelingPolicy> labeling_policy;
  AnalyticsConfig analytics;

  friend bool operator==(const SimulationConfig&,
                         const SimulationConfig&) = default;
};

// A config that passed validate_config. Immutable; cheap to share by const
// reference across workers.
class ValidatedConfig {
 public:
  const SimulationConfig& get() const { return cfg_; }
  const SimulationConfig* operator->() const { return &cfg_; }

  // Actions whose membership row selects `role`, ascending.
  const std::vector<std::size_t>& role_actions(std::size_t role) const {
    return role_actions_[role];
  }
  std::size_t action_role(std::size_t action) const {
    return action_role_[action];
  }
  std::size_t num_timespans() const { return cfg_.timespans.size(); }

 private:
  friend ValidatedConfig validate_config(const SimulationConfig&);
  explicit ValidatedConfig(SimulationConfig cfg);

  SimulationConfig cfg_;
  std::vector<std::vector<std::size_t>> role_actions_;
  std::vector<std::size_t> action_role_;
};

// Checks every config invariant. Throws ConfigError naming the first
// violated field and index.
ValidatedConfig validate_config(const SimulationConfig& cfg);

// Extra checks for the sensor block (positive support, sigma >= 0).
void validate_sensor(const SensorConfig& sensor);

// Index of the timespan containing (t mod 1440).
std::size_t timespan_index(double t_min, const SimulationConfig& cfg);

// Membership matrix with contiguous role blocks of the given sizes.
std::vector<std::vector<std::uint8_t>> block_membership(
    const std::vector<std::size_t>& actions_per_role);

// Config file (JSON). Keys carry their units. See README for the schema.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::string& path);
std::string serialize_config(const SimulationConfig& cfg);

}  // namespace agentsim
