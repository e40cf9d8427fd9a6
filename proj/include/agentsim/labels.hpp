#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "agentsim/config.hpp"
#include "agentsim/random.hpp"
#include "agentsim/road_graph.hpp"

namespace agentsim {

struct LabeledPoint {
  GeoPoint pos;
  std::size_t role = 0;
};

// Action ids are 0..A-1 in contiguous role blocks (all role-0 actions
// first), so the implied membership matrix is block_membership(counts).
struct LocationAssignment {
  std::size_t num_roles = 0;
  std::vector<VertexId> action_vertex;
  std::vector<std::size_t> action_role;
  std::vector<std::vector<std::size_t>> role_actions;

  std::size_t num_actions() const { return action_vertex.size(); }
  std::vector<std::size_t> actions_per_role() const;
  // A x R binary matrix consistent with action_role.
  std::vector<std::vector<std::uint8_t>> membership() const;
};

// Snaps each point to its nearest vertex; each point becomes one action.
// Throws if the list is empty or two points of different roles land on the
// same vertex.
LocationAssignment label_direct(const RoadGraph& graph,
                                const std::vector<LabeledPoint>& points,
                                std::size_t num_roles);

struct PolygonRegion {
  std::vector<GeoPoint> ring;  // closing vertex optional
  std::string code;
};

// Raster of region codes. Row 0 is the southernmost row; cell (r, c) covers
// [origin_lat + r*cell, origin_lat + (r+1)*cell) x the same in longitude.
// The code "." marks cells outside every region.
struct RegionGrid {
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double cell_deg = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> codes;  // row-major, rows * cols

  const std::string* code_at(const GeoPoint& p) const;
};

using Region = std::variant<PolygonRegion, RegionGrid>;

bool contains(const PolygonRegion& poly, const GeoPoint& p);

// Each vertex inside a region draws its role once from the region's
// probability vector. Overlaps resolve to the smallest-area region. Vertices
// outside every region are left unlabeled.
LocationAssignment label_indirect(const RoadGraph& graph,
                                  const std::vector<Region>& regions,
                                  const LabelingPolicy& policy,
                                  std::size_t num_roles, RandomStream& stream);

// Closed OSM ways carrying `tag_key` become polygons coded by the tag value.
std::vector<PolygonRegion> regions_from_osm(const OsmData& osm,
                                            const std::string& tag_key);

// "lat,lon,role" with a header line; role is an index or a role name.
std::vector<LabeledPoint> parse_labeled_points(
    const std::string& text, const std::vector<std::string>& role_names,
    std::size_t num_roles);

RegionGrid parse_region_grid(const std::string& text);

// "action_id,vertex_id,role"
std::string assignment_csv(const LocationAssignment& assignment);
LocationAssignment parse_assignment_csv(const std::string& text,
                                        std::size_t num_roles);

}  // namespace agentsim
