#pragma once

#include <stdexcept>
#include <string>

namespace daopf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleBoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroTotalDelta : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BasisInvalidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularNetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HourInfeasibleError : std::runtime_error {
  HourInfeasibleError(int hour, const std::string& what)
      : std::runtime_error("hour " + std::to_string(hour) + " infeasible: " + what), hour(hour) {}
  int hour;
};

}  // namespace daopf
