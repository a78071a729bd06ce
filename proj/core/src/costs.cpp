#include "physpline/costs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "physpline/angles.hpp"
#include "physpline/basis.hpp"
#include "physpline/errors.hpp"

namespace physpline {

void NormalEquations::symmetrize() {
  const Eigen::MatrixXd qt = Q.transpose();
  Q = 0.5 * (Q + qt);
}

TimeGrid grid_for(const MeasurementSet& meas, const FitConfig& config) {
  config.validate();
  return TimeGrid::uniform(config.grid_dt, meas.end_time());
}

namespace {

void check_dim(const NormalEquations& ne, const TimeGrid& grid,
               const char* op) {
  if (ne.dim() != 2 * grid.basis_count()) {
    throw ArgumentError(std::string(op) + ": system dimension " +
                        std::to_string(ne.dim()) + " does not match grid (" +
                        std::to_string(2 * grid.basis_count()) + ")");
  }
}

void check_family(const TimeGrid& grid, std::span<const Measurement> meas,
                  MeasurementKind kind, const char* op) {
  std::string offending;
  std::size_t bad_times = 0;
  for (const Measurement& m : meas) {
    if (m.kind != kind) {
      throw ArgumentError(std::string(op) +
                          ": measurement of unexpected kind at t=" +
                          std::to_string(m.t));
    }
    if (m.t < 0.0 || m.t > grid.end()) {
      if (bad_times < 5) {
        if (!offending.empty()) offending += ", ";
        offending += std::to_string(m.t);
      }
      ++bad_times;
    }
  }
  if (bad_times > 0) {
    if (bad_times > 5) offending += ", ...";
    throw ArgumentError(std::string(op) + ": " + std::to_string(bad_times) +
                        " measurement times outside [0, " +
                        std::to_string(grid.end()) + "]: " + offending);
  }
}

void require_weight(double value, const char* op) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ArgumentError(std::string(op) + ": weight must be finite and >= 0");
  }
}

// Shared body of the three plain L2 families: independent x and y rows at the
// given derivative order.
void add_axis_cost(NormalEquations& ne, const TimeGrid& grid,
                   std::span<const Measurement> meas, double family_weight,
                   Deriv order, MeasurementKind kind, const char* op) {
  check_dim(ne, grid, op);
  check_family(grid, meas, kind, op);
  require_weight(family_weight, op);
  if (meas.empty() || family_weight == 0.0) return;

  const auto m = static_cast<Eigen::Index>(meas.size());
  std::vector<double> times(meas.size());
  Eigen::VectorXd c(m), zx(m), zy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Measurement& mi = meas[static_cast<std::size_t>(i)];
    times[static_cast<std::size_t>(i)] = mi.t;
    c(i) = family_weight * mi.c;
    zx(i) = mi.x;
    zy(i) = mi.y;
  }

  const Eigen::MatrixXd f = design_matrix(grid, times, order);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  const Eigen::MatrixXd a = f.transpose() * (c.asDiagonal() * f);
  ne.Q.topLeftCorner(n, n) += a;
  ne.Q.bottomRightCorner(n, n) += a;
  ne.b.head(n) += f.transpose() * c.cwiseProduct(zx);
  ne.b.tail(n) += f.transpose() * c.cwiseProduct(zy);
}

}  // namespace

void add_position_cost(NormalEquations& ne, const TimeGrid& grid,
                       std::span<const Measurement> meas,
                       double family_weight) {
  add_axis_cost(ne, grid, meas, family_weight, Deriv::position,
                MeasurementKind::position, "add_position_cost");
}

void add_velocity_cost(NormalEquations& ne, const TimeGrid& grid,
                       std::span<const Measurement> meas,
                       double family_weight) {
  add_axis_cost(ne, grid, meas, family_weight, Deriv::velocity,
                MeasurementKind::velocity, "add_velocity_cost");
}

void add_acceleration_cost(NormalEquations& ne, const TimeGrid& grid,
                           std::span<const Measurement> meas,
                           double family_weight) {
  add_axis_cost(ne, grid, meas, family_weight, Deriv::acceleration,
                MeasurementKind::acceleration, "add_acceleration_cost");
}

void add_lonlat_position_cost(NormalEquations& ne, const TimeGrid& grid,
                              std::span<const Measurement> meas,
                              double lon_weight, double lat_weight) {
  const char* op = "add_lonlat_position_cost";
  check_dim(ne, grid, op);
  check_family(grid, meas, MeasurementKind::lonlat_position, op);
  require_weight(lon_weight, op);
  require_weight(lat_weight, op);
  if (meas.empty() || (lon_weight == 0.0 && lat_weight == 0.0)) return;

  const auto m = static_cast<Eigen::Index>(meas.size());
  std::vector<double> times(meas.size());
  Eigen::VectorXd cos_ref(m), sin_ref(m), c_lon(m), c_lat(m), zx(m), zy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Measurement& mi = meas[static_cast<std::size_t>(i)];
    const double psi = wrap_angle(mi.psi_ref);
    times[static_cast<std::size_t>(i)] = mi.t;
    cos_ref(i) = std::cos(psi);
    sin_ref(i) = std::sin(psi);
    c_lon(i) = lon_weight * mi.c_lon * mi.c;
    c_lat(i) = lat_weight * mi.c_lat * mi.c;
    zx(i) = mi.x;
    zy(i) = mi.y;
  }

  const Eigen::MatrixXd f = design_matrix(grid, times, Deriv::position);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());

  // One stacked row per measurement: [alpha * f_row, beta * f_row] with
  // (alpha, beta) = (cos, sin) for longitudinal and (-sin, cos) for lateral.
  const auto add_split = [&](const Eigen::VectorXd& alpha,
                             const Eigen::VectorXd& beta,
                             const Eigen::VectorXd& weights) {
    Eigen::MatrixXd g(m, 2 * n);
    g.leftCols(n) = alpha.asDiagonal() * f;
    g.rightCols(n) = beta.asDiagonal() * f;
    const Eigen::VectorXd z = alpha.cwiseProduct(zx) + beta.cwiseProduct(zy);
    ne.Q += g.transpose() * (weights.asDiagonal() * g);
    ne.b += g.transpose() * weights.cwiseProduct(z);
  };
  add_split(cos_ref, sin_ref, c_lon);
  add_split(-sin_ref, cos_ref, c_lat);
}

void add_heading_direction_cost(NormalEquations& ne, const TimeGrid& grid,
                                std::span<const Measurement> meas,
                                double family_weight) {
  const char* op = "add_heading_direction_cost";
  check_dim(ne, grid, op);
  check_family(grid, meas, MeasurementKind::heading, op);
  require_weight(family_weight, op);
  if (meas.empty() || family_weight == 0.0) return;

  const auto m = static_cast<Eigen::Index>(meas.size());
  std::vector<double> times(meas.size());
  Eigen::VectorXd alpha(m), beta(m), c(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Measurement& mi = meas[static_cast<std::size_t>(i)];
    const double psi = wrap_angle(mi.psi);
    const double s = std::sin(psi);
    const double co = std::cos(psi);
    times[static_cast<std::size_t>(i)] = mi.t;
    // The residual tan(psi) vx - vy (or -vx + cot(psi) vy) vanishes exactly
    // when velocity points along psi; the branch with the bounded
    // coefficient is used, ties going to the tan branch.
    if (std::abs(s) <= std::abs(co)) {
      alpha(i) = s / co;
      beta(i) = -1.0;
    } else {
      alpha(i) = -1.0;
      beta(i) = co / s;
    }
    c(i) = family_weight * mi.c;
  }

  const Eigen::MatrixXd f = design_matrix(grid, times, Deriv::velocity);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  Eigen::MatrixXd g(m, 2 * n);
  g.leftCols(n) = alpha.asDiagonal() * f;
  g.rightCols(n) = beta.asDiagonal() * f;
  ne.Q += g.transpose() * (c.asDiagonal() * g);
}

namespace {

struct SpeedSample {
  double t = 0.0;
  double speed = 0.0;
};

std::vector<SpeedSample> speeds_from_velocities(
    const std::vector<Measurement>& vels) {
  std::vector<SpeedSample> out;
  out.reserve(vels.size());
  for (const Measurement& m : vels) {
    out.push_back({m.t, std::hypot(m.x, m.y)});
  }
  return out;
}

// Speed estimates from positions alone. Two estimators per sample: a short
// central difference (sharp but noisy) and the slope of a least-squares line
// over a window (smooth but smeared at stop edges). The minimum of the two
// keeps both properties: inside a stop the short difference is small, while
// during motion both stay near the true speed. The window keeps its full
// width near the track edges by shifting inward; a truncated window would
// double the slope noise exactly where a missed sample leaves a boundary
// knot unregularized.
std::vector<SpeedSample> speeds_from_positions(
    const std::vector<std::array<double, 3>>& pts, double window) {
  const std::size_t p = pts.size();
  std::vector<SpeedSample> out(p);
  const double inf = std::numeric_limits<double>::infinity();
  const double t_first = pts.front()[0];
  const double t_last = pts.back()[0];
  const double half = 0.5 * window;

  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < p; ++i) {
    const double t = pts[i][0];
    out[i].t = t;

    const std::size_t a = (i == 0) ? 0 : i - 1;
    const std::size_t b = (i + 1 == p) ? p - 1 : i + 1;
    const double span = pts[b][0] - pts[a][0];
    double short_speed = inf;
    if (span > 1e-12) {
      short_speed =
          std::hypot(pts[b][1] - pts[a][1], pts[b][2] - pts[a][2]) / span;
    }

    const double tc = t_last - t_first <= window
                          ? 0.5 * (t_first + t_last)
                          : std::clamp(t, t_first + half, t_last - half);
    while (pts[lo][0] < tc - half) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < p && pts[hi + 1][0] <= tc + half) ++hi;

    double ls_speed = inf;
    const std::size_t count = hi - lo + 1;
    if (count >= 3) {
      double st = 0, sx = 0, sy = 0, stt = 0, stx = 0, sty = 0;
      for (std::size_t k = lo; k <= hi; ++k) {
        const double tk = pts[k][0] - t;
        st += tk;
        sx += pts[k][1];
        sy += pts[k][2];
        stt += tk * tk;
        stx += tk * pts[k][1];
        sty += tk * pts[k][2];
      }
      const double nn = static_cast<double>(count);
      const double var = stt - st * st / nn;
      if (var > 1e-12) {
        const double slope_x = (stx - st * sx / nn) / var;
        const double slope_y = (sty - st * sy / nn) / var;
        ls_speed = std::hypot(slope_x, slope_y);
      }
    }
    out[i].speed = std::min(short_speed, ls_speed);
  }
  return out;
}

}  // namespace

std::vector<TimeInterval> detect_standstill(const MeasurementSet& meas,
                                            double v_stop, double t_stop) {
  if (!std::isfinite(v_stop) || v_stop <= 0.0 || !std::isfinite(t_stop) ||
      t_stop <= 0.0) {
    throw ArgumentError("detect_standstill: v_stop and t_stop must be > 0");
  }

  std::vector<SpeedSample> speeds;
  const auto vels = meas.of_kind(MeasurementKind::velocity);
  if (!vels.empty()) {
    speeds = speeds_from_velocities(vels);
  } else {
    std::vector<std::array<double, 3>> pts;
    for (const Measurement& m : meas.all()) {
      if (m.kind == MeasurementKind::position ||
          m.kind == MeasurementKind::lonlat_position) {
        if (!pts.empty() && m.t - pts.back()[0] < 1e-12) continue;
        pts.push_back({m.t, m.x, m.y});
      }
    }
    if (pts.size() < 3) return {};
    speeds = speeds_from_positions(pts, std::max(t_stop, 2.0));
  }

  std::vector<TimeInterval> out;
  std::size_t i = 0;
  while (i < speeds.size()) {
    if (speeds[i].speed >= v_stop) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < speeds.size() && speeds[j + 1].speed < v_stop) ++j;
    if (speeds[j].t - speeds[i].t >= t_stop) {
      out.push_back({speeds[i].t, speeds[j].t});
    }
    i = j + 1;
  }
  return out;
}

void add_zero_velocity_regularization(NormalEquations& ne,
                                      const TimeGrid& grid,
                                      std::span<const TimeInterval> intervals,
                                      double c) {
  const char* op = "add_zero_velocity_regularization";
  check_dim(ne, grid, op);
  require_weight(c, op);
  if (intervals.empty() || c == 0.0) return;

  std::vector<double> knots;
  for (std::size_t k = 0; k < grid.knot_count(); ++k) {
    const double t = grid.knot(k);
    const bool inside =
        std::any_of(intervals.begin(), intervals.end(),
                    [t](const TimeInterval& iv) {
                      return iv.t_start <= t && t <= iv.t_end;
                    });
    if (inside) knots.push_back(t);
  }
  if (knots.empty()) return;

  const Eigen::MatrixXd f = design_matrix(grid, knots, Deriv::velocity);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  const Eigen::MatrixXd a = c * (f.transpose() * f);
  ne.Q.topLeftCorner(n, n) += a;
  ne.Q.bottomRightCorner(n, n) += a;
}

void add_acceleration_regularization(NormalEquations& ne, const TimeGrid& grid,
                                     double lambda) {
  const char* op = "add_acceleration_regularization";
  check_dim(ne, grid, op);
  require_weight(lambda, op);
  if (lambda == 0.0) return;

  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  for (Eigen::Index j = 2; j < n; ++j) {
    ne.Q(j, j) += lambda;
    ne.Q(n + j, n + j) += lambda;
  }
}

NormalEquations assemble(const MeasurementSet& meas, const FitConfig& config,
                         const TimeGrid& grid) {
  config.validate();
  if (!meas.has_kind(MeasurementKind::position) &&
      !meas.has_kind(MeasurementKind::lonlat_position)) {
    throw UnanchoredProblemError(
        "no position measurements: nothing anchors the trajectory; add "
        "position data or relax the input filter");
  }

  NormalEquations ne(2 * grid.basis_count());
  if (config.c_pos > 0.0) {
    add_position_cost(ne, grid, meas.of_kind(MeasurementKind::position),
                      config.c_pos);
  }
  if (config.c_vel > 0.0) {
    add_velocity_cost(ne, grid, meas.of_kind(MeasurementKind::velocity),
                      config.c_vel);
  }
  if (config.c_acc > 0.0) {
    add_acceleration_cost(ne, grid,
                          meas.of_kind(MeasurementKind::acceleration),
                          config.c_acc);
  }
  if (config.c_lon > 0.0 || config.c_lat > 0.0) {
    add_lonlat_position_cost(
        ne, grid, meas.of_kind(MeasurementKind::lonlat_position),
        config.c_lon, config.c_lat);
  }
  if (config.use_heading_dir && config.c_heading_dir > 0.0) {
    add_heading_direction_cost(ne, grid,
                               meas.of_kind(MeasurementKind::heading),
                               config.c_heading_dir);
  }
  if (config.c_zero_vel > 0.0) {
    const auto intervals =
        detect_standstill(meas, config.v_stop, config.t_stop);
    add_zero_velocity_regularization(ne, grid, intervals, config.c_zero_vel);
  }
  add_acceleration_regularization(ne, grid, config.lambda_acc_reg);
  ne.symmetrize();
  return ne;
}

NormalEquations assemble(const MeasurementSet& meas, const FitConfig& config) {
  return assemble(meas, config, grid_for(meas, config));
}

}  // namespace physpline
