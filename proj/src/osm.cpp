#include "agentsim/osm.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <optional>
#include <unordered_set>

#include <expat.h>

#include "agentsim/error.hpp"

namespace agentsim {

namespace {

const char* attribute(const XML_Char** attrs, const char* name) {
  for (std::size_t i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

template <typename T>
std::optional<T> parse_number(const char* text) {
  if (!text) return std::nullopt;
  T value{};
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

class OsmHandler {
 public:
  explicit OsmHandler(XML_Parser parser) : parser_(parser) {}

  void start(const XML_Char* name, const XML_Char** attrs) {
    ++depth_;
    if (failed()) return;
    if (std::strcmp(name, "node") == 0 && depth_ == 2) {
      auto id = parse_number<OsmId>(attribute(attrs, "id"));
      auto lat = parse_number<double>(attribute(attrs, "lat"));
      auto lon = parse_number<double>(attribute(attrs, "lon"));
      if (!id || !lat || !lon) return fail("node needs numeric id, lat, lon");
      GeoPoint pos{*lat, *lon};
      if (!is_valid(pos)) return fail("node coordinates out of range");
      data_.nodes.push_back({*id, pos, {}});
      container_ = Container::kNode;
    } else if (std::strcmp(name, "way") == 0 && depth_ == 2) {
      auto id = parse_number<OsmId>(attribute(attrs, "id"));
      if (!id) return fail("way needs a numeric id");
      data_.ways.push_back({*id, {}, {}});
      container_ = Container::kWay;
    } else if (depth_ == 2) {
      container_ = Container::kOther;
    } else if (std::strcmp(name, "nd") == 0 && container_ == Container::kWay) {
      auto ref = parse_number<OsmId>(attribute(attrs, "ref"));
      if (!ref) return fail("nd needs a numeric ref");
      data_.ways.back().node_refs.push_back(*ref);
    } else if (std::strcmp(name, "tag") == 0 && depth_ == 3) {
      const char* k = attribute(attrs, "k");
      const char* v = attribute(attrs, "v");
      if (!k || !v) return fail("tag needs k and v");
      if (container_ == Container::kNode) data_.nodes.back().tags[k] = v;
      if (container_ == Container::kWay) data_.ways.back().tags[k] = v;
    }
  }

  void end() {
    if (depth_ == 2) container_ = Container::kNone;
    --depth_;
  }

  bool failed() const { return !error_.empty(); }
  const std::string& error() const { return error_; }
  std::size_t error_line() const { return error_line_; }
  OsmData take() { return std::move(data_); }

 private:
  enum class Container { kNone, kNode, kWay, kOther };

  void fail(const std::string& what) {
    error_ = what;
    error_line_ = XML_GetCurrentLineNumber(parser_);
    XML_StopParser(parser_, XML_FALSE);
  }

  XML_Parser parser_;
  OsmData data_;
  int depth_ = 0;
  Container container_ = Container::kNone;
  std::string error_;
  std::size_t error_line_ = 0;
};

// Expat wrapper fed in chunks so large extracts never sit in memory twice.
class StreamingParser {
 public:
  StreamingParser() : parser_(XML_ParserCreate(nullptr)), handler_(parser_) {
    if (!parser_) throw Error("cannot allocate XML parser");
    XML_SetUserData(parser_, &handler_);
    XML_SetElementHandler(
        parser_,
        [](void* self, const XML_Char* name, const XML_Char** attrs) {
          static_cast<OsmHandler*>(self)->start(name, attrs);
        },
        [](void* self, const XML_Char*) {
          static_cast<OsmHandler*>(self)->end();
        });
  }
  ~StreamingParser() { XML_ParserFree(parser_); }
  StreamingParser(const StreamingParser&) = delete;
  StreamingParser& operator=(const StreamingParser&) = delete;

  void feed(const char* data, std::size_t size, bool last) {
    if (XML_Parse(parser_, data, static_cast<int>(size), last ? 1 : 0) ==
        XML_STATUS_ERROR) {
      if (handler_.failed()) {
        throw ParseError(handler_.error(), handler_.error_line());
      }
      throw ParseError(XML_ErrorString(XML_GetErrorCode(parser_)),
                       XML_GetCurrentLineNumber(parser_));
    }
  }

  OsmData finish() {
    OsmData data = handler_.take();
    if (data.nodes.empty() && data.ways.empty()) {
      throw ParseError("document contains no nodes or ways");
    }
    std::unordered_set<OsmId> known;
    known.reserve(data.nodes.size());
    for (const auto& n : data.nodes) known.insert(n.id);
    std::vector<OsmWay> kept;
    kept.reserve(data.ways.size());
    for (auto& w : data.ways) {
      bool ok = !w.node_refs.empty();
      for (OsmId ref : w.node_refs) ok = ok && known.count(ref) > 0;
      if (ok) {
        kept.push_back(std::move(w));
      } else {
        ++data.dropped_ways;
      }
    }
    data.ways = std::move(kept);
    return data;
  }

 private:
  XML_Parser parser_;
  OsmHandler handler_;
};

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

OsmData parse_osm(std::string_view document) {
  if (blank(document)) throw ParseError("empty document");
  StreamingParser parser;
  constexpr std::size_t kChunk = 1 << 20;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(kChunk, document.size() - offset);
    parser.feed(document.data() + offset, n, offset + n == document.size());
    offset += n;
  } while (offset < document.size());
  return parser.finish();
}

OsmData load_osm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open OSM file " + path);
  StreamingParser parser;
  std::vector<char> buf(1 << 20);
  bool any = false;
  for (;;) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto n = static_cast<std::size_t>(in.gcount());
    const bool last = in.eof() || n == 0;
    if (!any && last && blank(std::string_view(buf.data(), n))) {
      throw ParseError("empty document");
    }
    any = true;
    parser.feed(buf.data(), n, last);
    if (last) break;
  }
  return parser.finish();
}

}  // namespace agentsim
