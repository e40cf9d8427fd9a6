#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "agentsim/error.hpp"
#include "agentsim/road_graph.hpp"
#include "support.hpp"

using namespace agentsim;

TEST_SUITE("road_graph") {

TEST_CASE("highway ways only, haversine weights") {
  const auto osm = parse_osm(R"(<osm>
    <node id="1" lat="0" lon="0"/><node id="2" lat="0" lon="0.01"/>
    <node id="3" lat="0.01" lon="0.01"/><node id="4" lat="0.02" lon="0.02"/>
    <way id="1"><nd ref="1"/><nd ref="2"/><nd ref="3"/><tag k="highway" v="primary"/></way>
    <way id="2"><nd ref="3"/><nd ref="4"/><tag k="building" v="yes"/></way>
  </osm>)");
  BuildStats stats;
  const auto g = build_graph(osm, &stats);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(stats.road_ways == 1);
  CHECK(stats.skipped_ways == 1);
  CHECK(*g.weight(0, 1) == doctest::Approx(haversine({0, 0}, {0, 0.01})));
  CHECK(*g.weight(1, 0) == *g.weight(0, 1));
  CHECK_FALSE(g.weight(0, 2));
  CHECK(g.vertex(2).osm_id == 3);
}

TEST_CASE("nodes with identical coordinates merge") {
  const auto osm = parse_osm(R"(<osm>
    <node id="1" lat="1" lon="1"/><node id="2" lat="1" lon="1.001"/>
    <node id="3" lat="1" lon="1.001"/><node id="4" lat="1.001" lon="1.001"/>
    <way id="1"><nd ref="1"/><nd ref="2"/><tag k="highway" v="service"/></way>
    <way id="2"><nd ref="3"/><nd ref="4"/><tag k="highway" v="service"/></way>
  </osm>)");
  BuildStats stats;
  const auto g = build_graph(osm, &stats);
  CHECK(g.vertex_count() == 3);
  CHECK(stats.merged_vertices == 1);
  CHECK(g.degree(1) == 2);
}

TEST_CASE("repeated consecutive nodes are degenerate segments") {
  const auto osm = parse_osm(R"(<osm>
    <node id="1" lat="1" lon="1"/><node id="2" lat="1" lon="1.001"/>
    <way id="1"><nd ref="1"/><nd ref="1"/><nd ref="2"/><tag k="highway" v="service"/></way>
  </osm>)");
  BuildStats stats;
  const auto g = build_graph(osm, &stats);
  CHECK(g.edge_count() == 1);
  CHECK(stats.degenerate_segments == 1);
}

TEST_CASE("constructor rejects bad edges") {
  std::vector<Vertex> vs(2);
  vs[1].pos = {0, 1};
  const std::vector<EdgeSpec> loop{{0, 0, 1.0}};
  CHECK_THROWS_AS(RoadGraph(vs, loop), Error);
  const std::vector<EdgeSpec> zero{{0, 1, 0.0}};
  CHECK_THROWS_AS(RoadGraph(vs, zero), Error);
  const std::vector<EdgeSpec> out_of_range{{0, 5, 1.0}};
  CHECK_THROWS_AS(RoadGraph(vs, out_of_range), Error);
  const std::vector<EdgeSpec> dup{{0, 1, 2.0}, {1, 0, 3.0}};
  const RoadGraph g(vs, dup);
  CHECK(g.edge_count() == 1);
  CHECK(*g.weight(0, 1) == 2.0);
}

TEST_CASE("nearest vertex matches a linear scan") {
  agentsim::testing::GridCity city{15, 15, 33.3, 44.35, 0.0013};
  const auto g = build_graph(parse_osm(agentsim::testing::grid_osm(city)));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(33.28, 33.34), lon(44.33, 44.39);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint p{lat(rng), lon(rng)};
    VertexId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const double d = haversine(p, g.position(v));
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    REQUIRE(nearest_vertex(g, p) == best);
  }
}

TEST_CASE("nearest vertex ties go to the smallest id") {
  std::vector<Vertex> vs(3);
  vs[0].pos = {0, 0.002};
  vs[1].pos = {0, 0.0};
  vs[2].pos = {0, 0.001};
  const std::vector<EdgeSpec> e{{0, 2, 1}, {1, 2, 1}};
  const RoadGraph g(vs, e);
  CHECK(nearest_vertex(g, {0, 0.001}) == 2);
  CHECK(nearest_vertex(g, {0, 0.0015}) == 0);
  CHECK(nearest_vertex(g, {0, 0.0005}) == 1);
  CHECK_THROWS(nearest_vertex(RoadGraph{}, {0, 0}));
}

TEST_CASE("fixture map graph") {
  BuildStats stats;
  const auto g = build_graph(load_osm(agentsim::testing::data_path("maps/toy_city.osm")), &stats);
  CHECK(g.vertex_count() == 147);
  CHECK(g.edge_count() == 277);
  CHECK(stats.merged_vertices == 1);
  const auto csv = edge_list_csv(g);
  CHECK(csv.rfind("u,v,meters\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 278);
}

}
