#include "physpline/heading_spline.hpp"

#include <cmath>
#include <string>

#include "physpline/basis.hpp"
#include "physpline/errors.hpp"

namespace physpline {

HeadingSpline::HeadingSpline(TimeGrid grid, Eigen::VectorXd cos_block,
                             Eigen::VectorXd sin_block)
    : grid_(std::move(grid)),
      cos_block_(std::move(cos_block)),
      sin_block_(std::move(sin_block)) {
  const auto n = static_cast<Eigen::Index>(grid_.basis_count());
  if (cos_block_.size() != n || sin_block_.size() != n) {
    throw ArgumentError("heading weight blocks must have size " +
                        std::to_string(n));
  }
  if (!cos_block_.allFinite() || !sin_block_.allFinite()) {
    throw ArgumentError("heading weights must be finite");
  }
}

HeadingComponents HeadingSpline::components(double t) const {
  const Eigen::RowVectorXd r0 = basis_row(grid_, t, Deriv::position);
  const Eigen::RowVectorXd r1 = basis_row(grid_, t, Deriv::velocity);
  HeadingComponents c;
  c.cos_value = r0.dot(cos_block_);
  c.sin_value = r0.dot(sin_block_);
  c.cos_rate = r1.dot(cos_block_);
  c.sin_rate = r1.dot(sin_block_);
  return c;
}

double HeadingSpline::magnitude(double t) const {
  const HeadingComponents c = components(t);
  return std::hypot(c.cos_value, c.sin_value);
}

double reconstruct_heading(const HeadingSpline& hs, double t) {
  const HeadingComponents c = hs.components(t);
  const double mag = std::hypot(c.cos_value, c.sin_value);
  if (mag <= kMinHeadingMagnitude) {
    throw UndefinedHeadingError("heading undefined at t = " +
                                std::to_string(t) + " (component magnitude " +
                                std::to_string(mag) + ")");
  }
  return std::atan2(c.sin_value, c.cos_value);
}

std::optional<double> try_reconstruct_heading(const HeadingSpline& hs,
                                              double t) {
  const HeadingComponents c = hs.components(t);
  if (std::hypot(c.cos_value, c.sin_value) <= kMinHeadingMagnitude) {
    return std::nullopt;
  }
  return std::atan2(c.sin_value, c.cos_value);
}

}  // namespace physpline
