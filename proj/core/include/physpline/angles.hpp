#pragma once

#include <cmath>
#include <numbers>

namespace physpline {

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

/// Smallest signed difference a - b wrapped to (-pi, pi].
inline double angle_difference(double a, double b) {
  return wrap_angle(a - b);
}

}  // namespace physpline
