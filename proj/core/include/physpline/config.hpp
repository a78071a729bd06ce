#pragma once

namespace physpline {

/// Global knobs of a trajectory fit. Family-level weights multiply the
/// per-measurement weights; a cost family is active when its flag (where one
/// exists) is set and its weight is positive.
struct FitConfig {
  /// Knot spacing of the uniform time grid, s.
  double grid_dt = 0.5;

  /// Family weights for the plain L2 measurement costs.
  double c_pos = 1.0;
  double c_vel = 1.0;
  double c_acc = 1.0;

  /// Longitudinal/lateral weights of split position costs.
  double c_lon = 1.0;
  double c_lat = 1.0;

  /// Weight of the heading-direction cost (velocity must point along the
  /// measured heading). Off by default.
  double c_heading_dir = 0.0;

  /// Ridge weight shrinking acceleration weights toward zero. Keeps the
  /// system well-posed when measurements leave knots unconstrained.
  double lambda_acc_reg = 1e-6;

  /// Zero-velocity regularization: weight, and the detector's speed/duration
  /// thresholds. Off by default.
  double c_zero_vel = 0.0;
  double v_stop = 0.1;  // m/s
  double t_stop = 1.0;  // s

  /// Split plain position measurements into lon/lat residuals when a heading
  /// source is available.
  bool use_lonlat_split = false;
  /// Master switch for the heading-direction cost.
  bool use_heading_dir = true;

  /// Throws ArgumentError on out-of-range values.
  void validate() const;
};

}  // namespace physpline
