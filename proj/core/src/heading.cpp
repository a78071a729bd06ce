#include "physpline/heading.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "physpline/angles.hpp"
#include "physpline/basis.hpp"
#include "physpline/errors.hpp"
#include "physpline/solver.hpp"

namespace physpline {

namespace {

void check_dim(const NormalEquations& ne, const TimeGrid& grid,
               const char* op) {
  if (ne.dim() != 2 * grid.basis_count()) {
    throw ArgumentError(std::string(op) + ": system dimension " +
                        std::to_string(ne.dim()) + " does not match grid (" +
                        std::to_string(2 * grid.basis_count()) + ")");
  }
}

void require_weight(double value, const char* op) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ArgumentError(std::string(op) + ": weight must be finite and >= 0");
  }
}

void check_time(double t, const TimeGrid& grid, const char* op) {
  if (!(t >= 0.0) || t > grid.end()) {
    throw ArgumentError(std::string(op) + ": sample time " +
                        std::to_string(t) + " outside [0, " +
                        std::to_string(grid.end()) + "]");
  }
}

}  // namespace

void add_heading_measurement_cost(NormalEquations& ne, const TimeGrid& grid,
                                  std::span<const Measurement> meas,
                                  double family_weight) {
  const char* op = "add_heading_measurement_cost";
  check_dim(ne, grid, op);
  require_weight(family_weight, op);
  if (meas.empty() || family_weight == 0.0) return;

  const auto m = static_cast<Eigen::Index>(meas.size());
  std::vector<double> times(meas.size());
  Eigen::VectorXd c(m), z_cos(m), z_sin(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Measurement& mi = meas[static_cast<std::size_t>(i)];
    if (mi.kind != MeasurementKind::heading) {
      throw ArgumentError(std::string(op) + ": non-heading measurement at t=" +
                          std::to_string(mi.t));
    }
    check_time(mi.t, grid, op);
    const double psi = wrap_angle(mi.psi);
    times[static_cast<std::size_t>(i)] = mi.t;
    c(i) = family_weight * mi.c;
    z_cos(i) = std::cos(psi);
    z_sin(i) = std::sin(psi);
  }

  const Eigen::MatrixXd f = design_matrix(grid, times, Deriv::position);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  const Eigen::MatrixXd a = f.transpose() * (c.asDiagonal() * f);
  ne.Q.topLeftCorner(n, n) += a;
  ne.Q.bottomRightCorner(n, n) += a;
  ne.b.head(n) += f.transpose() * c.cwiseProduct(z_cos);
  ne.b.tail(n) += f.transpose() * c.cwiseProduct(z_sin);
}

void add_velocity_heading_cost(NormalEquations& ne, const TimeGrid& grid,
                               std::span<const VelocitySample> samples,
                               double c) {
  const char* op = "add_velocity_heading_cost";
  check_dim(ne, grid, op);
  require_weight(c, op);
  if (samples.empty() || c == 0.0) return;

  const auto m = static_cast<Eigen::Index>(samples.size());
  std::vector<double> times(samples.size());
  Eigen::VectorXd vx(m), vy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const VelocitySample& s = samples[static_cast<std::size_t>(i)];
    check_time(s.t, grid, op);
    times[static_cast<std::size_t>(i)] = s.t;
    vx(i) = s.vx;
    vy(i) = s.vy;
  }

  const Eigen::MatrixXd f = design_matrix(grid, times, Deriv::position);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  Eigen::MatrixXd g(m, 2 * n);
  g.leftCols(n) = (-vy).asDiagonal() * f;
  g.rightCols(n) = vx.asDiagonal() * f;
  ne.Q += c * (g.transpose() * g);
}

std::size_t add_acceleration_heading_cost(NormalEquations& ne,
                                          const TimeGrid& grid,
                                          std::span<const AccelSample> samples,
                                          double c) {
  const char* op = "add_acceleration_heading_cost";
  check_dim(ne, grid, op);
  require_weight(c, op);
  if (samples.empty() || c == 0.0) return 0;

  std::vector<double> times;
  std::vector<double> v, v_dot, ax, ay;
  std::size_t skipped = 0;
  for (const AccelSample& s : samples) {
    check_time(s.t, grid, op);
    if (!(s.v > kMinHeadingFitSpeed)) {
      ++skipped;
      continue;
    }
    times.push_back(s.t);
    v.push_back(s.v);
    v_dot.push_back(s.v_dot);
    ax.push_back(s.ax);
    ay.push_back(s.ay);
  }
  if (times.empty()) return skipped;

  const auto m = static_cast<Eigen::Index>(times.size());
  const Eigen::MatrixXd f0 = design_matrix(grid, times, Deriv::position);
  const Eigen::MatrixXd f1 = design_matrix(grid, times, Deriv::velocity);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());

  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), m);
  const Eigen::Map<const Eigen::VectorXd> vd(v_dot.data(), m);
  const Eigen::Map<const Eigen::VectorXd> zx(ax.data(), m);
  const Eigen::Map<const Eigen::VectorXd> zy(ay.data(), m);

  // Rows of v * fdot + v_dot * f per component; the cos rows target ax and
  // the sin rows target ay.
  const Eigen::MatrixXd rows =
      vv.asDiagonal() * f1 + vd.asDiagonal() * f0;
  const Eigen::MatrixXd a = c * (rows.transpose() * rows);
  ne.Q.topLeftCorner(n, n) += a;
  ne.Q.bottomRightCorner(n, n) += a;
  ne.b.head(n) += c * (rows.transpose() * zx);
  ne.b.tail(n) += c * (rows.transpose() * zy);
  return skipped;
}

HeadingSpline fit_heading(const TimeGrid& grid,
                          std::span<const Measurement> heading_meas,
                          std::span<const VelocitySample> vel_samples,
                          std::span<const AccelSample> acc_samples,
                          const HeadingFitConfig& config) {
  const bool has_moving_velocity =
      std::any_of(vel_samples.begin(), vel_samples.end(),
                  [](const VelocitySample& s) {
                    return std::hypot(s.vx, s.vy) > 0.0;
                  });
  if (heading_meas.empty() && !has_moving_velocity) {
    throw UnanchoredProblemError(
        "heading fit needs heading measurements or moving velocity samples");
  }

  NormalEquations ne(2 * grid.basis_count());
  if (config.c_heading > 0.0) {
    add_heading_measurement_cost(ne, grid, heading_meas, config.c_heading);
  }
  if (config.c_velocity > 0.0) {
    add_velocity_heading_cost(ne, grid, vel_samples, config.c_velocity);
  }
  if (config.c_acceleration > 0.0) {
    add_acceleration_heading_cost(ne, grid, acc_samples,
                                  config.c_acceleration);
  }
  add_acceleration_regularization(ne, grid, config.lambda_reg);
  ne.symmetrize();

  WeightVector w = solve(ne);
  return HeadingSpline(grid, std::move(w.x_block), std::move(w.y_block));
}

}  // namespace physpline
