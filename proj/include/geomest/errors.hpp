#ifndef GEOMEST_ERRORS_HPP
#define GEOMEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace geomest {

// Grid cannot support the requested stencil or mode content.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values, step underflow, unmet ODE tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A stated operation precondition does not hold for the given data.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Metric failed the positive-definiteness check.
class DegenerateMetricError : public std::runtime_error {
 public:
  explicit DegenerateMetricError(const std::string& what) : std::runtime_error(what) {}
};

// An integrated trajectory left the chart box.
class DomainEscapeError : public std::runtime_error {
 public:
  DomainEscapeError(const std::string& what, double exit_time)
      : std::runtime_error(what), exit_time(exit_time) {}
  double exit_time;
};

// Calibration could not fit a constant (degenerate structural term).
class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geomest

#endif
