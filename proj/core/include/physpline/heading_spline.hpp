#pragma once

#include <Eigen/Core>
#include <optional>

#include "physpline/grid.hpp"

namespace physpline {

/// Below this magnitude of (cos, sin) components the heading angle is
/// considered undefined.
inline constexpr double kMinHeadingMagnitude = 1e-6;

/// Values of the two heading component splines and their derivatives at one
/// time.
struct HeadingComponents {
  double cos_value = 0.0;
  double sin_value = 0.0;
  double cos_rate = 0.0;
  double sin_rate = 0.0;
};

/// Smooth heading signal stored as two component splines sharing one basis:
/// one fits cos(psi), the other sin(psi). The angle is recovered with atan2,
/// which resolves the periodic wrap-around of raw heading angles.
class HeadingSpline {
public:
  HeadingSpline(TimeGrid grid, Eigen::VectorXd cos_block,
                Eigen::VectorXd sin_block);

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& cos_block() const { return cos_block_; }
  const Eigen::VectorXd& sin_block() const { return sin_block_; }

  HeadingComponents components(double t) const;
  double magnitude(double t) const;

private:
  TimeGrid grid_;
  Eigen::VectorXd cos_block_;
  Eigen::VectorXd sin_block_;
};

/// Reconstructs the heading angle in (-pi, pi] at time t.
/// Throws UndefinedHeadingError when the component magnitude is below
/// kMinHeadingMagnitude.
double reconstruct_heading(const HeadingSpline& hs, double t);

/// Like reconstruct_heading but returns nullopt instead of throwing.
std::optional<double> try_reconstruct_heading(const HeadingSpline& hs, double t);

}  // namespace physpline
