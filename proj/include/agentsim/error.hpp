#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agentsim {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value violates an invariant. `field()` names the offending
// field, `index()` the offending element (npos when the whole field is bad).
class ConfigError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ConfigError(std::string field, std::size_t index, const std::string& what);

  const std::string& field() const { return field_; }
  std::size_t index() const { return index_; }

 private:
  std::string field_;
  std::size_t index_;
};

// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Stored intermediate has an unexpected schema name or version.
class FormatError : public Error {
 public:
  using Error::Error;
};

class NoRouteError : public Error {
 public:
  NoRouteError(std::size_t src, std::size_t dst);
  std::size_t source() const { return src_; }
  std::size_t destination() const { return dst_; }

 private:
  std::size_t src_;
  std::size_t dst_;
};

}  // namespace agentsim
