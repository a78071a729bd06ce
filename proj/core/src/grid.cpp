#include "physpline/grid.hpp"

#include <cmath>
#include <string>

#include "physpline/errors.hpp"

namespace physpline {

TimeGrid::TimeGrid(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) {
    throw ArgumentError("TimeGrid needs at least 2 knots, got " +
                        std::to_string(knots_.size()));
  }
  if (knots_.front() != 0.0) {
    throw ArgumentError("TimeGrid must start at t = 0, got " +
                        std::to_string(knots_.front()));
  }
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i] < knots_[i + 1])) {
      throw ArgumentError("TimeGrid knots must be strictly increasing (knot " +
                          std::to_string(i + 1) + ")");
    }
    if (!std::isfinite(knots_[i + 1])) {
      throw ArgumentError("TimeGrid knots must be finite");
    }
  }
}

TimeGrid TimeGrid::uniform(double dt, double t_end) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ArgumentError("grid resolution must be positive, got " +
                        std::to_string(dt));
  }
  if (t_end < 0.0 || !std::isfinite(t_end)) {
    throw ArgumentError("grid end must be nonnegative, got " +
                        std::to_string(t_end));
  }
  // Round up to cover t_end; the slack term avoids an extra knot when
  // t_end / dt lands a few ulp above an integer.
  auto intervals =
      static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  if (intervals < 1) intervals = 1;
  while (static_cast<double>(intervals) * dt < t_end) ++intervals;

  std::vector<double> knots(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    knots[i] = static_cast<double>(i) * dt;
  }
  return TimeGrid(std::move(knots));
}

}  // namespace physpline
