#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "agentsim/geo.hpp"

namespace agentsim {

using OsmId = std::int64_t;
using TagMap = std::map<std::string, std::string>;

struct OsmNode {
  OsmId id = 0;
  GeoPoint pos;
  TagMap tags;
};

struct OsmWay {
  OsmId id = 0;
  std::vector<OsmId> node_refs;
  TagMap tags;

  bool is_closed() const {
    return node_refs.size() >= 4 && node_refs.front() == node_refs.back();
  }
};

struct OsmData {
  std::vector<OsmNode> nodes;  // document order
  std::vector<OsmWay> ways;    // document order, only ways with resolvable refs
  std::size_t dropped_ways = 0;  // ways referencing unknown node ids
};

// Parses an OSM XML document. Relations are skipped. Throws ParseError with
// the offending line on malformed XML, and on a document with no elements.
OsmData parse_osm(std::string_view document);
OsmData load_osm(const std::string& path);

}  // namespace agentsim
