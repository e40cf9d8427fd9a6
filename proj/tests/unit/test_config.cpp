#include <doctest.h>

#include <string>

#include "agentsim/config.hpp"
#include "agentsim/error.hpp"
#include "support.hpp"

using namespace agentsim;
using agentsim::testing::activity_config;
using agentsim::testing::data_path;

namespace {

SimulationConfig base() {
  return activity_config(10, 1440, 0.01, 0.5, {1, 1},
                         {{1, 1}, {2, 0}}, {3, 2});
}

// Field and index of the error raised by validating `cfg`.
std::pair<std::string, std::size_t> failure(const SimulationConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    return {e.field(), e.index()};
  }
  return {"", 0};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("a well-formed config validates") {
  const auto v = validate_config(base());
  CHECK(v.role_actions(0) == std::vector<std::size_t>{0, 1, 2});
  CHECK(v.role_actions(1) == std::vector<std::size_t>{3, 4});
  CHECK(v.action_role(4) == 1);
  CHECK(v.num_timespans() == 2);
}

TEST_CASE("violations name the field and index") {
  auto cfg = base();
  cfg.num_agents = 0;
  CHECK(failure(cfg).first == "num_agents");

  cfg = base();
  cfg.normal_prob = 1.5;
  CHECK(failure(cfg).first == "normal_prob");

  cfg = base();
  cfg.event_rate_per_min = 0.0;
  CHECK(failure(cfg).first == "event_rate_per_min");

  cfg = base();
  cfg.normal_counts = {1, 3};
  CHECK(failure(cfg) == std::pair<std::string, std::size_t>{"normal_counts", 1});

  cfg = base();
  cfg.action_membership[2] = {1, 1};
  CHECK(failure(cfg) == std::pair<std::string, std::size_t>{"action_membership", 2});

  cfg = base();
  cfg.action_membership[0] = {0, 0};
  CHECK(failure(cfg) == std::pair<std::string, std::size_t>{"action_membership", 0});

  cfg = base();
  cfg.role_concentration[1] = {0, 0};
  CHECK(failure(cfg) == std::pair<std::string, std::size_t>{"role_concentration", 1});

  cfg = base();
  cfg.role_concentration[0] = {1, -1};
  CHECK(failure(cfg).first == "role_concentration");

  cfg = base();
  cfg.timespans[0].end_min = 700;
  CHECK(failure(cfg).first == "timespans");

  cfg = base();
  cfg.timespans.back().end_min = 1400;
  CHECK(failure(cfg).first == "timespans");

  cfg = base();
  cfg.home_role = 2;
  CHECK(failure(cfg).first == "home_role");
}

TEST_CASE("error messages carry the offending values") {
  auto cfg = base();
  cfg.normal_counts = {4, 1};
  try {
    validate_config(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("normal_counts[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("4 > 3") != std::string::npos);
  }
}

TEST_CASE("timespan lookup wraps the day") {
  const auto cfg = base();
  CHECK(timespan_index(0.0, cfg) == 0);
  CHECK(timespan_index(719.9, cfg) == 0);
  CHECK(timespan_index(720.0, cfg) == 1);
  CHECK(timespan_index(1439.9, cfg) == 1);
  CHECK(timespan_index(1440.0, cfg) == 0);
  CHECK(timespan_index(1440.0 + 800.0, cfg) == 1);
}

TEST_CASE("block membership") {
  const auto m = block_membership({2, 0, 1});
  REQUIRE(m.size() == 3);
  CHECK(m[0] == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(m[1] == std::vector<std::uint8_t>{1, 0, 0});
  CHECK(m[2] == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("serialize and parse round-trip") {
  auto cfg = base();
  cfg.role_names = {"home", "work"};
  cfg.sensor = SensorConfig{EmpiricalDistribution({1, 2, 3}, {0.25, 0.75}),
                            EmpiricalDistribution({0.5, 1}, {1}), 4.5};
  cfg.labeling_policy = LabelingPolicy{{"R", {0.9, 0.1}}};
  cfg.analytics.heatmap_bbox = BoundingBox{1, 2, 3, 4};
  cfg.analytics.series_agents = {0, 5};
  cfg.seed = 0xFFFFFFFFFFFFFFFFull;
  cfg.event_rate_per_min = 1.0 / 3.0;
  const auto back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
}

TEST_CASE("parse rejects wrong format and missing keys") {
  CHECK_THROWS_AS(parse_config("{\"format\": \"other\"}"), Error);
  CHECK_THROWS_AS(parse_config("not json"), Error);
  CHECK_THROWS_AS(parse_config("{\"num_agents\": 1}"), Error);
}

TEST_CASE("shipped configs load and validate") {
  for (const char* name : {"deterministic.json", "random.json", "realistic.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(validate_config(load_config(data_path(std::string("configs/") + name))));
  }
  const auto toy = load_config(data_path("configs/toy.json"));
  CHECK(toy.num_agents == 100);
  CHECK(toy.role_names == std::vector<std::string>{"home", "work", "public"});
  REQUIRE(toy.sensor);
  CHECK_NOTHROW(validate_sensor(*toy.sensor));
  CHECK(toy.num_actions == 0);
}

TEST_CASE("sensor validation") {
  SensorConfig s{EmpiricalDistribution({0, 2}, {1}),
                 EmpiricalDistribution({1, 2}, {1}), 1.0};
  CHECK_THROWS_AS(validate_sensor(s), ConfigError);
  s.speed_mps = EmpiricalDistribution({1, 2}, {1});
  CHECK_NOTHROW(validate_sensor(s));
  s.noise_sigma_m = -1.0;
  CHECK_THROWS_AS(validate_sensor(s), ConfigError);
}

}
