#include "agentsim/error.hpp"

namespace agentsim {

namespace {
std::string locate(const std::string& field, std::size_t index) {
  if (index == ConfigError::npos) return field;
  return field + "[" + std::to_string(index) + "]";
}
}  // namespace

ConfigError::ConfigError(std::string field, std::size_t index,
                         const std::string& what)
    : Error(locate(field, index) + ": " + what),
      field_(std::move(field)),
      index_(index) {}

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

NoRouteError::NoRouteError(std::size_t src, std::size_t dst)
    : Error("no route from vertex " + std::to_string(src) + " to vertex " +
            std::to_string(dst)),
      src_(src),
      dst_(dst) {}

}  // namespace agentsim
