#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "physpline/basis.hpp"
#include "physpline/grid.hpp"
#include "physpline/heading_spline.hpp"

namespace physpline {

/// Below this speed the travel direction (course) is undefined.
inline constexpr double kMinCourseSpeed = 1e-6;  // m/s

/// Fitted parameters of one track. Per axis: initial position, initial
/// velocity, then one acceleration value per knot.
struct WeightVector {
  Eigen::VectorXd x_block;
  Eigen::VectorXd y_block;
};

/// Full kinematic state at a single time (track-relative seconds).
struct KinematicState {
  double t = 0.0;
  double x = 0.0, y = 0.0;    // m
  double vx = 0.0, vy = 0.0;  // m/s
  double ax = 0.0, ay = 0.0;  // m/s^2

  double speed() const;
  /// Direction of travel, atan2(vy, vx); empty below kMinCourseSpeed.
  std::optional<double> course() const;
};

/// A fitted trajectory model: position/velocity/acceleration are linear
/// combinations of one basis, so velocity is the exact derivative of position
/// and acceleration the exact derivative of velocity. Immutable.
class PhysicalSpline {
public:
  PhysicalSpline(TimeGrid grid, WeightVector weights, double t_offset = 0.0,
                 std::optional<HeadingSpline> heading = std::nullopt);

  const TimeGrid& grid() const { return grid_; }
  const WeightVector& weights() const { return weights_; }
  /// Shift that maps recorded timestamps to track-relative time: the first
  /// measurement of the source track sits at t = 0.
  double t_offset() const { return t_offset_; }
  const std::optional<HeadingSpline>& heading_model() const { return heading_; }

  /// Copy of this spline with the given heading model attached.
  PhysicalSpline with_heading_model(HeadingSpline hs) const;

  /// State at track-relative time t. Times past the last knot extrapolate at
  /// constant acceleration equal to the last weight.
  KinematicState evaluate(double t) const;

  /// Equal to evaluate() at each time up to rounding (within 1e-12); computed
  /// through design-matrix products.
  std::vector<KinematicState> evaluate_batch(std::span<const double> times) const;

  /// Grid extended by uniform knots whose acceleration weights are zero: the
  /// motion continues at constant velocity past the old end. States up to the
  /// old final knot are unchanged.
  PhysicalSpline extend_constant_velocity(std::size_t extra_knots) const;

private:
  TimeGrid grid_;
  WeightVector weights_;
  double t_offset_ = 0.0;
  std::optional<HeadingSpline> heading_;
};

}  // namespace physpline
