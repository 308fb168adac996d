#pragma once

#include <stdexcept>
#include <string>

namespace latgeo {

/// Operand lengths do not match.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain, e.g. a flat-metric formula on a
/// metric whose ratio derivative is not constant.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The integrator produced non-finite or runaway values.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_good_s)
      : std::runtime_error(what), last_good_s_(last_good_s) {}

  /// Geodesic time of the last state that passed the finiteness check.
  double last_good_s() const noexcept { return last_good_s_; }

 private:
  double last_good_s_;
};

}  // namespace latgeo
