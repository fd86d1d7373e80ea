#pragma once

#include <stdexcept>
#include <string>

namespace dhopf {

/// Malformed input file or literal.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geometric precondition does not hold (degenerate input, point outside
/// the body, general position violated, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical search did not reach its tolerance.
class SearchError : public std::runtime_error {
 public:
  SearchError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

}  // namespace dhopf
