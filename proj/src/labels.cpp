#include "agentsim/labels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include "agentsim/error.hpp"
#include "agentsim/text.hpp"

namespace agentsim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

LocationAssignment make_assignment(
    std::size_t num_roles,
    const std::vector<std::pair<VertexId, std::size_t>>& labeled) {
  LocationAssignment out;
  out.num_roles = num_roles;
  out.role_actions.resize(num_roles);
  // Stable by role: action ids form contiguous role blocks.
  for (std::size_t r = 0; r < num_roles; ++r) {
    for (const auto& [v, role] : labeled) {
      if (role != r) continue;
      out.role_actions[r].push_back(out.action_vertex.size());
      out.action_vertex.push_back(v);
      out.action_role.push_back(r);
    }
  }
  return out;
}

double polygon_area_m2(const std::vector<GeoPoint>& ring) {
  if (ring.size() < 3) return 0.0;
  double lat0 = 0.0;
  for (const auto& p : ring) lat0 += p.lat;
  lat0 /= static_cast<double>(ring.size());
  const double kx = kDeg * kEarthRadiusM * std::cos(lat0 * kDeg);
  const double ky = kDeg * kEarthRadiusM;
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    twice += (a.lon * kx) * (b.lat * ky) - (b.lon * kx) * (a.lat * ky);
  }
  return std::abs(twice) / 2.0;
}

double grid_cell_area_m2(const RegionGrid& grid, const GeoPoint& p) {
  const double side = grid.cell_deg * kDeg * kEarthRadiusM;
  return side * side * std::cos(p.lat * kDeg);
}

}  // namespace

// _____________________________________________________________________________
std::vector<std::size_t> LocationAssignment::actions_per_role() const {
  std::vector<std::size_t> out(num_roles, 0);
  for (std::size_t r = 0; r < num_roles; ++r) out[r] = role_actions[r].size();
  return out;
}

std::vector<std::vector<std::uint8_t>> LocationAssignment::membership() const {
  std::vector<std::vector<std::uint8_t>> g(
      num_actions(), std::vector<std::uint8_t>(num_roles, 0));
  for (std::size_t a = 0; a < num_actions(); ++a) g[a][action_role[a]] = 1;
  return g;
}

LocationAssignment label_direct(const RoadGraph& graph,
                                const std::vector<LabeledPoint>& points,
                                std::size_t num_roles) {
  if (points.empty()) throw Error("label_direct: no locations");
  if (graph.empty()) throw Error("label_direct: empty graph");
  std::vector<std::pair<VertexId, std::size_t>> labeled;
  labeled.reserve(points.size());
  std::unordered_map<VertexId, std::size_t> role_at;
  std::vector<std::string> collisions;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.role >= num_roles) {
      throw Error("label_direct: point " + std::to_string(i) + " has role " +
                  std::to_string(p.role) + " but only " +
                  std::to_string(num_roles) + " roles exist");
    }
    const VertexId v = nearest_vertex(graph, p.pos);
    auto [it, inserted] = role_at.emplace(v, p.role);
    if (!inserted && it->second != p.role) {
      collisions.push_back("point " + std::to_string(i) + " (role " +
                           std::to_string(p.role) + ") -> vertex " +
                           std::to_string(v) + " already labeled role " +
                           std::to_string(it->second));
    }
    labeled.emplace_back(v, p.role);
  }
  if (!collisions.empty()) {
    std::string msg = "label_direct: conflicting labels:";
    for (const auto& c : collisions) msg += "\n  " + c;
    throw Error(msg);
  }
  return make_assignment(num_roles, labeled);
}

// _____________________________________________________________________________
const std::string* RegionGrid::code_at(const GeoPoint& p) const {
  if (cell_deg <= 0.0) return nullptr;
  const double r = std::floor((p.lat - origin_lat) / cell_deg);
  const double c = std::floor((p.lon - origin_lon) / cell_deg);
  if (r < 0.0 || c < 0.0 || r >= static_cast<double>(rows) ||
      c >= static_cast<double>(cols)) {
    return nullptr;
  }
  const auto& code =
      codes[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
  if (code == ".") return nullptr;
  return &code;
}

bool contains(const PolygonRegion& poly, const GeoPoint& p) {
  const auto& ring = poly.ring;
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

LocationAssignment label_indirect(const RoadGraph& graph,
                                  const std::vector<Region>& regions,
                                  const LabelingPolicy& policy,
                                  std::size_t num_roles, RandomStream& stream) {
  auto check_code = [&](const std::string& code) {
    auto it = policy.find(code);
    if (it == policy.end()) {
      throw Error("label_indirect: unknown region code '" + code + "'");
    }
    if (it->second.size() != num_roles) {
      throw Error("label_indirect: policy for '" + code + "' needs " +
                  std::to_string(num_roles) + " entries");
    }
  };
  struct PolygonInfo {
    const PolygonRegion* poly;
    BoundingBox box;
    double area;
  };
  std::vector<std::variant<PolygonInfo, const RegionGrid*>> prepared;
  for (const auto& region : regions) {
    if (const auto* poly = std::get_if<PolygonRegion>(&region)) {
      check_code(poly->code);
      BoundingBox box{90, 180, -90, -180};
      for (const auto& p : poly->ring) {
        box.min_lat = std::min(box.min_lat, p.lat);
        box.max_lat = std::max(box.max_lat, p.lat);
        box.min_lon = std::min(box.min_lon, p.lon);
        box.max_lon = std::max(box.max_lon, p.lon);
      }
      prepared.emplace_back(PolygonInfo{poly, box, polygon_area_m2(poly->ring)});
    } else {
      const auto& grid = std::get<RegionGrid>(region);
      for (const auto& code : grid.codes) {
        if (code != ".") check_code(code);
      }
      prepared.emplace_back(&grid);
    }
  }

  std::vector<std::pair<VertexId, std::size_t>> labeled;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const GeoPoint& p = graph.position(v);
    const std::string* code = nullptr;
    double best_area = std::numeric_limits<double>::infinity();
    for (const auto& item : prepared) {
      if (const auto* info = std::get_if<PolygonInfo>(&item)) {
        const auto& b = info->box;
        if (p.lat < b.min_lat || p.lat > b.max_lat || p.lon < b.min_lon ||
            p.lon > b.max_lon || !contains(*info->poly, p)) {
          continue;
        }
        if (info->area < best_area) {
          best_area = info->area;
          code = &info->poly->code;
        }
      } else {
        const RegionGrid* grid = std::get<const RegionGrid*>(item);
        const std::string* c = grid->code_at(p);
        if (!c) continue;
        const double area = grid_cell_area_m2(*grid, p);
        if (area < best_area) {
          best_area = area;
          code = c;
        }
      }
    }
    if (!code) continue;
    labeled.emplace_back(v, stream.categorical(policy.at(*code)));
  }
  return make_assignment(num_roles, labeled);
}

std::vector<PolygonRegion> regions_from_osm(const OsmData& osm,
                                            const std::string& tag_key) {
  std::unordered_map<OsmId, GeoPoint> pos;
  pos.reserve(osm.nodes.size());
  for (const auto& n : osm.nodes) pos.emplace(n.id, n.pos);
  std::vector<PolygonRegion> out;
  for (const auto& way : osm.ways) {
    auto it = way.tags.find(tag_key);
    if (it == way.tags.end() || !way.is_closed()) continue;
    PolygonRegion poly;
    poly.code = it->second;
    for (std::size_t i = 0; i + 1 < way.node_refs.size(); ++i) {
      poly.ring.push_back(pos.at(way.node_refs[i]));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

// _____________________________________________________________________________
std::vector<LabeledPoint> parse_labeled_points(
    const std::string& text, const std::vector<std::string>& role_names,
    std::size_t num_roles) {
  std::vector<LabeledPoint> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (body.rfind("lat", 0) == 0) continue;
    }
    const auto fields = split(body);
    if (fields.size() != 3) {
      throw ParseError("labels: expected lat,lon,role", line_no);
    }
    LabeledPoint p;
    try {
      p.pos = {parse_double(fields[0]), parse_double(fields[1])};
    } catch (const ParseError& e) {
      throw ParseError(std::string("labels: ") + e.what(), line_no);
    }
    if (!is_valid(p.pos)) throw ParseError("labels: bad coordinates", line_no);
    const auto role = trim(fields[2]);
    auto named = std::find(role_names.begin(), role_names.end(), role);
    if (named != role_names.end()) {
      p.role = static_cast<std::size_t>(named - role_names.begin());
    } else {
      long long idx = -1;
      try {
        idx = parse_int(role);
      } catch (const ParseError&) {
        throw ParseError("labels: unknown role '" + std::string(role) + "'",
                         line_no);
      }
      if (idx < 0 || static_cast<std::size_t>(idx) >= num_roles) {
        throw ParseError("labels: role index out of range", line_no);
      }
      p.role = static_cast<std::size_t>(idx);
    }
    out.push_back(p);
  }
  return out;
}

RegionGrid parse_region_grid(const std::string& text) {
  RegionGrid grid;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::string> header;
  const std::set<std::string> keys{"origin_lat", "origin_lon", "cell_size_deg",
                                   "rows", "cols"};
  bool magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      if (body.find("agentsim-region-grid") != std::string_view::npos) {
        if (body.find("v1") == std::string_view::npos) {
          throw FormatError("region grid: unsupported version");
        }
        magic = true;
      }
      continue;
    }
    std::istringstream fields{std::string(body)};
    std::string first;
    fields >> first;
    if (keys.count(first)) {
      std::string value;
      fields >> value;
      header[first] = value;
      continue;
    }
    if (header.size() != keys.size()) {
      throw ParseError("region grid: header incomplete before data", line_no);
    }
    std::vector<std::string> row{first};
    for (std::string code; fields >> code;) row.push_back(code);
    if (grid.cols == 0) {
      grid.origin_lat = parse_double(header["origin_lat"]);
      grid.origin_lon = parse_double(header["origin_lon"]);
      grid.cell_deg = parse_double(header["cell_size_deg"]);
      grid.rows = static_cast<std::size_t>(parse_int(header["rows"]));
      grid.cols = static_cast<std::size_t>(parse_int(header["cols"]));
      if (grid.cell_deg <= 0.0 || grid.rows == 0 || grid.cols == 0) {
        throw ParseError("region grid: bad dimensions", line_no);
      }
    }
    if (row.size() != grid.cols) {
      throw ParseError("region grid: expected " + std::to_string(grid.cols) +
                           " codes",
                       line_no);
    }
    grid.codes.insert(grid.codes.end(), row.begin(), row.end());
  }
  if (!magic) throw FormatError("region grid: missing format header");
  if (grid.rows == 0 || grid.codes.size() != grid.rows * grid.cols) {
    throw ParseError("region grid: expected " + std::to_string(grid.rows) +
                     " rows of codes");
  }
  return grid;
}

std::string assignment_csv(const LocationAssignment& assignment) {
  std::string out = "action_id,vertex_id,role\n";
  for (std::size_t a = 0; a < assignment.num_actions(); ++a) {
    out += std::to_string(a) + ',' + std::to_string(assignment.action_vertex[a]) +
           ',' + std::to_string(assignment.action_role[a]) + '\n';
  }
  return out;
}

LocationAssignment parse_assignment_csv(const std::string& text,
                                        std::size_t num_roles) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<VertexId, std::size_t>> labeled;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (line_no == 1 || body.rfind("action_id", 0) == 0) {
      if (body != "action_id,vertex_id,role") {
        throw FormatError("assignment: unexpected header");
      }
      continue;
    }
    const auto f = split(body);
    if (f.size() != 3) throw ParseError("assignment: expected 3 fields", line_no);
    const auto action = static_cast<std::size_t>(parse_int(f[0]));
    const auto role = static_cast<std::size_t>(parse_int(f[2]));
    if (action != labeled.size()) {
      throw ParseError("assignment: action ids must be 0..A-1 in order",
                       line_no);
    }
    if (role >= num_roles) throw ParseError("assignment: bad role", line_no);
    labeled.emplace_back(static_cast<VertexId>(parse_int(f[1])), role);
  }
  LocationAssignment out = make_assignment(num_roles, labeled);
  if (out.action_role != [&] {
        std::vector<std::size_t> roles;
        for (const auto& l : labeled) roles.push_back(l.second);
        return roles;
      }()) {
    throw ParseError("assignment: actions are not in role blocks");
  }
  return out;
}

}  // namespace agentsim
