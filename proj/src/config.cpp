#include "agentsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agentsim/error.hpp"

namespace agentsim {

using nlohmann::json;

namespace {

constexpr const char* kConfigFormat = "agentsim-config";
constexpr int kConfigVersion = 1;

void require(bool ok, const char* field, std::size_t index,
             const std::string& what) {
  if (!ok) throw ConfigError(field, index, what);
}

}  // namespace

// _____________________________________________________________________________
ValidatedConfig::ValidatedConfig(SimulationConfig cfg) : cfg_(std::move(cfg)) {
  role_actions_.resize(cfg_.num_roles);
  action_role_.resize(cfg_.num_actions);
  for (std::size_t a = 0; a < cfg_.num_actions; ++a) {
    const auto& row = cfg_.action_membership[a];
    const auto r = static_cast<std::size_t>(
        std::find(row.begin(), row.end(), std::uint8_t{1}) - row.begin());
    action_role_[a] = r;
    role_actions_[r].push_back(a);
  }
}

void validate_sensor(const SensorConfig& s) {
  require(std::isfinite(s.noise_sigma_m) && s.noise_sigma_m >= 0.0,
          "sensor.noise_sigma_m", ConfigError::npos, "must be >= 0");
  require(s.speed_mps.bin_edges().front() > 0.0, "sensor.speed_mps",
          ConfigError::npos, "support must be strictly positive");
  require(s.frame_rate_hz.bin_edges().front() > 0.0, "sensor.frame_rate_hz",
          ConfigError::npos, "support must be strictly positive");
}

ValidatedConfig validate_config(const SimulationConfig& cfg) {
  constexpr auto npos = ConfigError::npos;
  require(cfg.num_agents > 0, "num_agents", npos, "must be positive");
  require(cfg.num_roles > 0, "num_roles", npos, "must be positive");
  require(cfg.num_actions > 0, "num_actions", npos, "must be positive");
  require(std::isfinite(cfg.total_time_min) && cfg.total_time_min >= 0.0,
          "total_time_min", npos, "must be finite and >= 0");
  require(std::isfinite(cfg.event_rate_per_min) && cfg.event_rate_per_min > 0.0,
          "event_rate_per_min", npos, "must be positive");
  require(cfg.normal_prob >= 0.0 && cfg.normal_prob <= 1.0, "normal_prob", npos,
          "must lie in [0, 1]");

  const std::size_t R = cfg.num_roles;
  const std::size_t A = cfg.num_actions;

  require(cfg.action_membership.size() == A, "action_membership", npos,
          "expected " + std::to_string(A) + " rows");
  std::vector<std::size_t> capacity(R, 0);
  for (std::size_t a = 0; a < A; ++a) {
    const auto& row = cfg.action_membership[a];
    require(row.size() == R, "action_membership", a,
            "expected " + std::to_string(R) + " columns");
    std::size_t sum = 0;
    for (std::size_t r = 0; r < R; ++r) {
      require(row[r] <= 1, "action_membership", a, "entries must be 0 or 1");
      sum += row[r];
      if (row[r]) ++capacity[r];
    }
    require(sum != 0, "action_membership", a, "action has no role");
    require(sum == 1, "action_membership", a,
            "action in multiple roles (row sums to " + std::to_string(sum) +
                ")");
  }

  require(cfg.normal_counts.size() == R, "normal_counts", npos,
          "expected " + std::to_string(R) + " entries");
  for (std::size_t r = 0; r < R; ++r) {
    require(cfg.normal_counts[r] <= capacity[r], "normal_counts", r,
            "P exceeds role capacity (" +
                std::to_string(cfg.normal_counts[r]) + " > " +
                std::to_string(capacity[r]) + ")");
  }

  const auto& ts = cfg.timespans;
  require(!ts.empty(), "timespans", npos, "need at least one timespan");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(ts[i].begin_min < ts[i].end_min, "timespans", i,
            "interval must be non-empty and ascending");
    const double expected_begin = i == 0 ? 0.0 : ts[i - 1].end_min;
    require(ts[i].begin_min == expected_begin, "timespans", i,
            "intervals must be contiguous and start at 0");
  }
  require(ts.back().end_min == kMinutesPerDay, "timespans", ts.size() - 1,
          "intervals must cover [0, 1440)");

  require(cfg.role_concentration.size() == ts.size(), "role_concentration",
          npos, "expected one row per timespan");
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const auto& row = cfg.role_concentration[t];
    require(row.size() == R, "role_concentration", t,
            "expected " + std::to_string(R) + " columns");
    bool positive = false;
    for (double x : row) {
      require(std::isfinite(x) && x >= 0.0, "role_concentration", t,
              "entries must be finite and >= 0");
      positive = positive || x > 0.0;
    }
    require(positive, "role_concentration", t,
            "row needs at least one positive entry");
  }

  require(cfg.role_names.empty() || cfg.role_names.size() == R, "role_names",
          npos, "expected " + std::to_string(R) + " names");
  require(cfg.home_role < R, "home_role", npos, "out of range");

  if (cfg.sensor) validate_sensor(*cfg.sensor);
  if (cfg.labeling_policy) {
    std::size_t i = 0;
    for (const auto& [code, probs] : *cfg.labeling_policy) {
      require(probs.size() == R, "labeling_policy", i,
              "code '" + code + "' needs " + std::to_string(R) + " entries");
      double total = 0.0;
      for (double p : probs) {
        require(std::isfinite(p) && p >= 0.0, "labeling_policy", i,
                "code '" + code + "' has a negative entry");
        total += p;
      }
      require(std::abs(total - 1.0) <= 1e-9, "labeling_policy", i,
              "code '" + code + "' does not sum to 1");
      ++i;
    }
  }
  require(cfg.analytics.histogram_bins >= 1, "analytics.histogram_bins", npos,
          "must be >= 1");
  require(cfg.analytics.heatmap_rows >= 1 && cfg.analytics.heatmap_cols >= 1,
          "analytics.heatmap", npos, "rows and cols must be >= 1");
  return ValidatedConfig(cfg);
}

// _____________________________________________________________________________
std::size_t timespan_index(double t_min, const SimulationConfig& cfg) {
  double m = std::fmod(t_min, kMinutesPerDay);
  if (m < 0.0) m += kMinutesPerDay;
  const auto& ts = cfg.timespans;
  auto it = std::upper_bound(
      ts.begin(), ts.end(), m,
      [](double v, const Timespan& span) { return v < span.end_min; });
  if (it == ts.end()) return ts.size() - 1;
  return static_cast<std::size_t>(it - ts.begin());
}

std::vector<std::vector<std::uint8_t>> block_membership(
    const std::vector<std::size_t>& actions_per_role) {
  std::vector<std::vector<std::uint8_t>> g;
  for (std::size_t r = 0; r < actions_per_role.size(); ++r) {
    for (std::size_t k = 0; k < actions_per_role[r]; ++k) {
      std::vector<std::uint8_t> row(actions_per_role.size(), 0);
      row[r] = 1;
      g.push_back(std::move(row));
    }
  }
  return g;
}

// _____________________________________________________________________________
namespace {

EmpiricalDistribution distribution_from_json(const json& j) {
  if (j.contains("samples")) {
    auto samples = j.at("samples").get<std::vector<double>>();
    return histogram(samples, j.value("bins", kDefaultHistogramBins));
  }
  return EmpiricalDistribution(j.at("bin_edges").get<std::vector<double>>(),
                               j.at("bin_mass").get<std::vector<double>>());
}

json distribution_to_json(const EmpiricalDistribution& d) {
  return json{{"bin_edges", d.bin_edges()}, {"bin_mass", d.bin_mass()}};
}

}  // namespace

SimulationConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (j.value("format", std::string(kConfigFormat)) != kConfigFormat) {
    throw FormatError("config: unexpected format '" +
                      j.at("format").get<std::string>() + "'");
  }
  if (j.value("version", kConfigVersion) != kConfigVersion) {
    throw FormatError("config: unsupported version " +
                      std::to_string(j.at("version").get<int>()));
  }

  SimulationConfig cfg;
  try {
    cfg.num_agents = j.at("num_agents").get<std::size_t>();
    if (j.contains("roles")) {
      cfg.role_names = j.at("roles").get<std::vector<std::string>>();
      cfg.num_roles = cfg.role_names.size();
    } else {
      cfg.num_roles = j.at("num_roles").get<std::size_t>();
    }
    cfg.total_time_min = j.at("total_time_min").get<double>();
    cfg.event_rate_per_min = j.at("event_rate_per_min").get<double>();
    cfg.normal_prob = j.at("normal_prob").get<double>();
    cfg.normal_counts = j.at("normal_counts").get<std::vector<std::size_t>>();
    cfg.role_concentration =
        j.at("role_concentration").get<std::vector<std::vector<double>>>();
    for (const auto& span : j.at("timespans_min")) {
      auto bounds = span.get<std::vector<double>>();
      if (bounds.size() != 2) {
        throw ConfigError("timespans_min", ConfigError::npos,
                          "each timespan is [begin, end]");
      }
      cfg.timespans.push_back({bounds[0], bounds[1]});
    }
    if (j.contains("action_membership")) {
      cfg.action_membership =
          j.at("action_membership")
              .get<std::vector<std::vector<std::uint8_t>>>();
    } else if (j.contains("actions_per_role")) {
      cfg.action_membership = block_membership(
          j.at("actions_per_role").get<std::vector<std::size_t>>());
    }
    cfg.num_actions = cfg.action_membership.size();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.home_role = j.value("home_role", std::size_t{0});

    if (j.contains("sensor")) {
      const auto& s = j.at("sensor");
      cfg.sensor = SensorConfig{distribution_from_json(s.at("speed_mps")),
                                distribution_from_json(s.at("frame_rate_hz")),
                                s.at("noise_sigma_m").get<double>()};
    }
    if (j.contains("labeling_policy")) {
      cfg.labeling_policy = j.at("labeling_policy").get<LabelingPolicy>();
    }
    if (j.contains("analytics")) {
      const auto& a = j.at("analytics");
      auto& out = cfg.analytics;
      out.histogram_bins = a.value("histogram_bins", out.histogram_bins);
      out.heatmap_rows = a.value("heatmap_rows", out.heatmap_rows);
      out.heatmap_cols = a.value("heatmap_cols", out.heatmap_cols);
      if (a.contains("heatmap_bbox")) {
        auto b = a.at("heatmap_bbox").get<std::vector<double>>();
        if (b.size() != 4) {
          throw ConfigError("analytics.heatmap_bbox", ConfigError::npos,
                            "expected [min_lat, min_lon, max_lat, max_lon]");
        }
        out.heatmap_bbox = BoundingBox{b[0], b[1], b[2], b[3]};
      }
      out.series_agents = a.value("series_agents", out.series_agents);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
  json j;
  j["format"] = kConfigFormat;
  j["version"] = kConfigVersion;
  j["num_agents"] = cfg.num_agents;
  if (cfg.role_names.empty()) {
    j["num_roles"] = cfg.num_roles;
  } else {
    j["roles"] = cfg.role_names;
  }
  j["total_time_min"] = cfg.total_time_min;
  j["event_rate_per_min"] = cfg.event_rate_per_min;
  j["normal_prob"] = cfg.normal_prob;
  j["normal_counts"] = cfg.normal_counts;
  json spans = json::array();
  for (const auto& t : cfg.timespans) spans.push_back({t.begin_min, t.end_min});
  j["timespans_min"] = spans;
  j["role_concentration"] = cfg.role_concentration;
  if (!cfg.action_membership.empty()) {
    j["action_membership"] = cfg.action_membership;
  }
  j["seed"] = cfg.seed;
  j["home_role"] = cfg.home_role;
  if (cfg.sensor) {
    j["sensor"] = {{"speed_mps", distribution_to_json(cfg.sensor->speed_mps)},
                   {"frame_rate_hz",
                    distribution_to_json(cfg.sensor->frame_rate_hz)},
                   {"noise_sigma_m", cfg.sensor->noise_sigma_m}};
  }
  if (cfg.labeling_policy) j["labeling_policy"] = *cfg.labeling_policy;
  const auto& a = cfg.analytics;
  j["analytics"] = {{"histogram_bins", a.histogram_bins},
                    {"heatmap_rows", a.heatmap_rows},
                    {"heatmap_cols", a.heatmap_cols},
                    {"series_agents", a.series_agents}};
  if (a.heatmap_bbox) {
    const auto& b = *a.heatmap_bbox;
    j["analytics"]["heatmap_bbox"] = {b.min_lat, b.min_lon, b.max_lat,
                                      b.max_lon};
  }
  return j.dump(2) + "\n";
}

}  // namespace agentsim
