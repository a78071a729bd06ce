#include "physpline/fit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "physpline/angles.hpp"
#include "physpline/errors.hpp"
#include "physpline/heading.hpp"
#include "physpline/solver.hpp"

namespace physpline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Raw heading measurements interpolated to time t (angles interpolated on the
// circle, clamped to the first/last measurement outside their span). Empty
// when there are no heading measurements.
std::optional<double> interpolate_raw_heading(
    const std::vector<Measurement>& headings, double t) {
  if (headings.empty()) return std::nullopt;
  const auto it = std::lower_bound(
      headings.begin(), headings.end(), t,
      [](const Measurement& m, double value) { return m.t < value; });
  if (it == headings.begin()) return wrap_angle(headings.front().psi);
  if (it == headings.end()) return wrap_angle(headings.back().psi);
  const Measurement& a = *(it - 1);
  const Measurement& b = *it;
  const double span = b.t - a.t;
  const double s = span > 0.0 ? (t - a.t) / span : 0.0;
  return wrap_angle(a.psi + s * angle_difference(b.psi, a.psi));
}

// Velocity and acceleration inputs for the heading fit, sampled from the
// Cartesian fit at the grid knots.
struct HeadingInputs {
  std::vector<VelocitySample> velocities;
  std::vector<AccelSample> accelerations;
  std::vector<Measurement> course_seed;
};

HeadingInputs heading_inputs_from(const PhysicalSpline& spline) {
  const TimeGrid& grid = spline.grid();
  const auto states = spline.evaluate_batch(grid.knots());

  HeadingInputs inputs;
  inputs.velocities.reserve(states.size());
  inputs.accelerations.reserve(states.size());
  for (const KinematicState& s : states) {
    inputs.velocities.push_back({s.t, s.vx, s.vy});
    const double v = s.speed();
    AccelSample acc{s.t, s.ax, s.ay, v, 0.0};
    if (v > kMinHeadingFitSpeed) {
      acc.v_dot = (s.vx * s.ax + s.vy * s.ay) / v;
      if (const auto course = s.course()) {
        inputs.course_seed.push_back(Measurement::heading(s.t, *course));
      }
    }
    inputs.accelerations.push_back(acc);
  }
  return inputs;
}

// Plain positions converted to lon/lat split positions along the given
// heading source; everything else passes through unchanged.
template <typename PsiSource>
std::vector<Measurement> split_positions(const std::vector<Measurement>& in,
                                         PsiSource&& psi_at) {
  std::vector<Measurement> out;
  out.reserve(in.size());
  for (const Measurement& m : in) {
    if (m.kind == MeasurementKind::position) {
      if (const std::optional<double> psi = psi_at(m.t)) {
        out.push_back(
            Measurement::lonlat_position(m.t, m.x, m.y, *psi, 1.0, 1.0, m.c));
        continue;
      }
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

std::vector<FamilyResidual> residual_summary(const PhysicalSpline& spline,
                                             const MeasurementSet& meas) {
  struct Acc {
    std::size_t count = 0;
    double sum_sq = 0.0;
    double max_abs = 0.0;
    void add(double e) {
      ++count;
      sum_sq += e * e;
      max_abs = std::max(max_abs, std::abs(e));
    }
  };
  Acc position, lon, lat, velocity, acceleration, heading;

  for (const Measurement& m : meas.all()) {
    const KinematicState s = spline.evaluate(m.t);
    switch (m.kind) {
      case MeasurementKind::position:
        position.add(std::hypot(s.x - m.x, s.y - m.y));
        break;
      case MeasurementKind::lonlat_position: {
        const double c = std::cos(m.psi_ref);
        const double si = std::sin(m.psi_ref);
        const double dx = s.x - m.x;
        const double dy = s.y - m.y;
        lon.add(c * dx + si * dy);
        lat.add(-si * dx + c * dy);
        break;
      }
      case MeasurementKind::velocity:
        velocity.add(std::hypot(s.vx - m.x, s.vy - m.y));
        break;
      case MeasurementKind::acceleration:
        acceleration.add(std::hypot(s.ax - m.x, s.ay - m.y));
        break;
      case MeasurementKind::heading: {
        std::optional<double> psi;
        if (spline.heading_model()) {
          psi = try_reconstruct_heading(*spline.heading_model(), m.t);
        } else if (const auto course = s.course()) {
          psi = course;
        }
        if (psi) heading.add(angle_difference(*psi, m.psi));
        break;
      }
    }
  }

  std::vector<FamilyResidual> out;
  const auto push = [&out](const char* name, const Acc& acc) {
    if (acc.count == 0) return;
    out.push_back({name, acc.count,
                   std::sqrt(acc.sum_sq / static_cast<double>(acc.count)),
                   acc.max_abs});
  };
  push("position", position);
  push("lon", lon);
  push("lat", lat);
  push("velocity", velocity);
  push("acceleration", acceleration);
  push("heading", heading);
  return out;
}

FitResult fit_trajectory(const MeasurementSet& meas, const FitConfig& config,
                         bool two_pass) {
  config.validate();
  const TimeGrid grid = grid_for(meas, config);
  const auto raw_headings = meas.of_kind(MeasurementKind::heading);

  // First Cartesian pass; without two_pass the only available lon/lat
  // heading source is the raw heading measurements.
  MeasurementSet pass1 = meas;
  if (config.use_lonlat_split && !raw_headings.empty()) {
    pass1 = MeasurementSet(
        split_positions(meas.all(),
                        [&raw_headings](double t) {
                          return interpolate_raw_heading(raw_headings, t);
                        }),
        meas.t_offset());
  }

  FitReport report;
  report.measurement_count = meas.size();
  report.knot_count = grid.knot_count();

  auto start = Clock::now();
  NormalEquations ne = assemble(pass1, config, grid);
  report.assembly_seconds = seconds_since(start);

  start = Clock::now();
  WeightVector w = solve(ne);
  report.solve_seconds = seconds_since(start);

  PhysicalSpline spline(grid, std::move(w), meas.t_offset());

  if (!raw_headings.empty() || two_pass) {
    start = Clock::now();
    const HeadingInputs inputs = heading_inputs_from(spline);
    const auto& anchors =
        raw_headings.empty() ? inputs.course_seed : raw_headings;
    // Nothing anchors the component magnitude when there are neither heading
    // measurements nor moving knots (standstill track): skip the heading fit
    // instead of solving a singular system.
    if (!anchors.empty()) {
      HeadingFitConfig hcfg;
      NormalEquations hne(2 * grid.basis_count());
      add_heading_measurement_cost(hne, grid, anchors, hcfg.c_heading);
      add_velocity_heading_cost(hne, grid, inputs.velocities,
                                hcfg.c_velocity);
      report.skipped_heading_accel_samples = add_acceleration_heading_cost(
          hne, grid, inputs.accelerations, hcfg.c_acceleration);
      add_acceleration_regularization(hne, grid, hcfg.lambda_reg);
      hne.symmetrize();
      WeightVector hw = solve(hne);
      spline = spline.with_heading_model(
          HeadingSpline(grid, std::move(hw.x_block), std::move(hw.y_block)));
      report.heading_fitted = true;
    }
    report.heading_seconds = seconds_since(start);
  }

  if (two_pass && spline.heading_model()) {
    const HeadingSpline hs = *spline.heading_model();

    std::vector<Measurement> second = split_positions(
        meas.all(),
        [&hs](double t) { return try_reconstruct_heading(hs, t); });

    // The direction cost of the second pass runs on headings sampled from
    // the heading model at the knots instead of the raw measurements.
    if (config.use_heading_dir && config.c_heading_dir > 0.0) {
      std::erase_if(second, [](const Measurement& m) {
        return m.kind == MeasurementKind::heading;
      });
      for (std::size_t k = 0; k < grid.knot_count(); ++k) {
        const double t = grid.knot(k);
        if (const auto psi = try_reconstruct_heading(hs, t)) {
          second.push_back(Measurement::heading(t, *psi));
        }
      }
    }

    const MeasurementSet pass2(std::move(second), meas.t_offset());
    start = Clock::now();
    NormalEquations ne2 = assemble(pass2, config, grid);
    report.assembly_seconds += seconds_since(start);

    start = Clock::now();
    WeightVector w2 = solve(ne2);
    report.solve_seconds += seconds_since(start);

    spline = PhysicalSpline(grid, std::move(w2), meas.t_offset(), hs);
    report.second_pass = true;
  }

  if (config.c_zero_vel > 0.0) {
    report.standstill = detect_standstill(meas, config.v_stop, config.t_stop);
  }
  report.residuals = residual_summary(spline, meas);
  return {std::move(spline), std::move(report)};
}

}  // namespace physpline
