#pragma once

#include <stdexcept>
#include <string>

namespace colorcache {

// Base for all recoverable simulator errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration; the message names the offending field path.
class ConfigError : public Error {
  public:
    ConfigError(const std::string &field, const std::string &what)
        : Error(field + ": " + what), field_(field) {}
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

// Malformed trace input; position is a line number (text) or byte offset (binary).
class TraceParseError : public Error {
  public:
    TraceParseError(std::size_t position, const std::string &what)
        : Error(what + " at " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

} // namespace colorcache
