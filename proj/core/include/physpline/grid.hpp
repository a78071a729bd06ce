#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace physpline {

/// Knot times of a physical spline. Strictly increasing, at least two knots,
/// and the first knot is exactly 0 (measurement times are shifted so that a
/// track starts at 0).
class TimeGrid {
public:
  explicit TimeGrid(std::vector<double> knots);

  /// Smallest uniform grid [0, dt, 2 dt, ...] whose last knot covers t_end.
  static TimeGrid uniform(double dt, double t_end);

  std::size_t knot_count() const { return knots_.size(); }
  /// Number of basis functions per axis: constant + ramp + one hat per knot.
  std::size_t basis_count() const { return knots_.size() + 2; }

  double knot(std::size_t i) const { return knots_[i]; }
  double start() const { return knots_.front(); }
  double end() const { return knots_.back(); }
  std::span<const double> knots() const { return knots_; }

  bool operator==(const TimeGrid&) const = default;

private:
  std::vector<double> knots_;
};

}  // namespace physpline
