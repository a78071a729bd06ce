#include "physpline/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "physpline/errors.hpp"

namespace physpline {

double KinematicState::speed() const { return std::hypot(vx, vy); }

std::optional<double> KinematicState::course() const {
  if (speed() < kMinCourseSpeed) return std::nullopt;
  return std::atan2(vy, vx);
}

PhysicalSpline::PhysicalSpline(TimeGrid grid, WeightVector weights,
                               double t_offset,
                               std::optional<HeadingSpline> heading)
    : grid_(std::move(grid)),
      weights_(std::move(weights)),
      t_offset_(t_offset),
      heading_(std::move(heading)) {
  const auto n = static_cast<Eigen::Index>(grid_.basis_count());
  if (weights_.x_block.size() != n || weights_.y_block.size() != n) {
    throw ArgumentError("weight blocks must have size " + std::to_string(n) +
                        " to match the grid");
  }
  if (!weights_.x_block.allFinite() || !weights_.y_block.allFinite()) {
    throw ArgumentError("weights must be finite");
  }
  if (!std::isfinite(t_offset_)) {
    throw ArgumentError("t_offset must be finite");
  }
}

PhysicalSpline PhysicalSpline::with_heading_model(HeadingSpline hs) const {
  return PhysicalSpline(grid_, weights_, t_offset_, std::move(hs));
}

KinematicState PhysicalSpline::evaluate(double t) const {
  KinematicState s;
  s.t = t;
  // Sequential scalar accumulation: extending the grid with zero weights then
  // adds exact 0.0 terms at the tail, so earlier states stay bit-identical.
  // Eigen's dot would regroup the sum when the vector length changes.
  const std::size_t n = grid_.basis_count();
  for (std::size_t j = 0; j < n; ++j) {
    const double f0 = eval_basis(grid_, j, t, Deriv::position);
    const double f1 = eval_basis(grid_, j, t, Deriv::velocity);
    const double f2 = eval_basis(grid_, j, t, Deriv::acceleration);
    const double wx = weights_.x_block[static_cast<Eigen::Index>(j)];
    const double wy = weights_.y_block[static_cast<Eigen::Index>(j)];
    s.x += wx * f0;
    s.y += wy * f0;
    s.vx += wx * f1;
    s.vy += wy * f1;
    s.ax += wx * f2;
    s.ay += wy * f2;
  }
  return s;
}

std::vector<KinematicState> PhysicalSpline::evaluate_batch(
    std::span<const double> times) const {
  std::vector<KinematicState> states(times.size());
  if (times.empty()) return states;

  const Eigen::MatrixXd f0 = design_matrix(grid_, times, Deriv::position);
  const Eigen::MatrixXd f1 = design_matrix(grid_, times, Deriv::velocity);
  const Eigen::MatrixXd f2 = design_matrix(grid_, times, Deriv::acceleration);

  const Eigen::VectorXd x = f0 * weights_.x_block;
  const Eigen::VectorXd y = f0 * weights_.y_block;
  const Eigen::VectorXd vx = f1 * weights_.x_block;
  const Eigen::VectorXd vy = f1 * weights_.y_block;
  const Eigen::VectorXd ax = f2 * weights_.x_block;
  const Eigen::VectorXd ay = f2 * weights_.y_block;

  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    states[i] = KinematicState{times[i], x(k), y(k), vx(k), vy(k), ax(k), ay(k)};
  }
  return states;
}

PhysicalSpline PhysicalSpline::extend_constant_velocity(
    std::size_t extra_knots) const {
  if (extra_knots < 1) {
    throw ArgumentError("extend_constant_velocity needs extra_knots >= 1");
  }
  const std::size_t k = grid_.knot_count();
  const double dt = grid_.knot(k - 1) - grid_.knot(k - 2);

  std::vector<double> knots(grid_.knots().begin(), grid_.knots().end());
  for (std::size_t i = 1; i <= extra_knots; ++i) {
    knots.push_back(grid_.end() + static_cast<double>(i) * dt);
  }

  WeightVector w;
  const auto extra = static_cast<Eigen::Index>(extra_knots);
  w.x_block = Eigen::VectorXd::Zero(weights_.x_block.size() + extra);
  w.y_block = Eigen::VectorXd::Zero(weights_.y_block.size() + extra);
  w.x_block.head(weights_.x_block.size()) = weights_.x_block;
  w.y_block.head(weights_.y_block.size()) = weights_.y_block;

  return PhysicalSpline(TimeGrid(std::move(knots)), std::move(w), t_offset_,
                        heading_);
}

}  // namespace physpline
