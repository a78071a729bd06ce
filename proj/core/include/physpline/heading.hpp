#pragma once

#include <cstddef>
#include <span>

#include "physpline/costs.hpp"
#include "physpline/heading_spline.hpp"
#include "physpline/measurement.hpp"

namespace physpline {

/// Samples with speed at or below this are skipped by the acceleration
/// heading cost (its v_dot term divides by speed) and carry no usable
/// direction for pseudo-measurements.
inline constexpr double kMinHeadingFitSpeed = 0.1;  // m/s

/// Velocity at one time, used to constrain the heading direction.
struct VelocitySample {
  double t = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

/// Acceleration plus the speed state needed by the acceleration heading cost:
/// v = sqrt(vx^2 + vy^2) and v_dot = (vx ax + vy ay) / v.
struct AccelSample {
  double t = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  double v = 0.0;
  double v_dot = 0.0;
};

/// Weights of the heading fit's cost families.
struct HeadingFitConfig {
  double c_heading = 1.0;
  double c_velocity = 1.0;
  double c_acceleration = 1.0;
  double lambda_reg = 1e-6;
};

/// The heading is estimated as two component splines over one basis, f_cos
/// fitting cos(psi) and f_sin fitting sin(psi); the angle is recovered with
/// atan2(f_sin, f_cos). The normal equations below stack the cos block first,
/// then the sin block, mirroring the x/y layout of the Cartesian fit.

/// L2 fit of the component splines to cos/sin of measured headings; these
/// measurements anchor the component magnitude near 1.
void add_heading_measurement_cost(NormalEquations& ne, const TimeGrid& grid,
                                  std::span<const Measurement> meas,
                                  double family_weight);

/// Homogeneous rows vx f_sin(t) - vy f_cos(t), zero exactly when the heading
/// points along the velocity. A zero-velocity sample contributes nothing.
void add_velocity_heading_cost(NormalEquations& ne, const TimeGrid& grid,
                               std::span<const VelocitySample> samples,
                               double c);

/// Rows fitting the chain-rule acceleration d/dt (v cos psi) to ax (and the
/// sin analogue to ay): v fdot_cos(t) + v_dot f_cos(t) = ax. Samples with
/// v <= kMinHeadingFitSpeed are skipped; returns how many were.
std::size_t add_acceleration_heading_cost(NormalEquations& ne,
                                          const TimeGrid& grid,
                                          std::span<const AccelSample> samples,
                                          double c);

/// Assembles and solves the heading system over the given grid. Requires at
/// least one heading measurement or one velocity sample with nonzero speed;
/// solver errors propagate.
HeadingSpline fit_heading(const TimeGrid& grid,
                          std::span<const Measurement> heading_meas,
                          std::span<const VelocitySample> vel_samples,
                          std::span<const AccelSample> acc_samples,
                          const HeadingFitConfig& config);

}  // namespace physpline
