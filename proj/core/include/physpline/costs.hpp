#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

#include "physpline/config.hpp"
#include "physpline/grid.hpp"
#include "physpline/measurement.hpp"

namespace physpline {

/// Accumulated normal equations Q w = b of the quadratic fitting problem.
/// The weight layout stacks the x block before the y block, so the dimension
/// is 2 (K + 2) for a grid with K knots. Every cost family adds terms of the
/// form c q q^T to Q (and c z q to b), which keeps Q symmetric positive
/// semidefinite.
struct NormalEquations {
  Eigen::MatrixXd Q;
  Eigen::VectorXd b;

  explicit NormalEquations(std::size_t dim)
      : Q(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim))),
        b(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}

  std::size_t dim() const { return static_cast<std::size_t>(b.size()); }

  /// Replaces Q by its symmetric part, removing rounding asymmetry.
  void symmetrize();
};

/// A closed time interval, used for standstill phases.
struct TimeInterval {
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Smallest uniform grid at config.grid_dt covering all measurement times.
TimeGrid grid_for(const MeasurementSet& meas, const FitConfig& config);

/// L2 position cost: for each measurement adds rows fitting x(t_i) and y(t_i)
/// independently. Effective weight per measurement is family_weight * m.c.
/// Measurements of a different kind, or with times outside [0, grid end],
/// raise ArgumentError.
void add_position_cost(NormalEquations& ne, const TimeGrid& grid,
                       std::span<const Measurement> meas,
                       double family_weight);

/// Same structure with first-derivative basis rows.
void add_velocity_cost(NormalEquations& ne, const TimeGrid& grid,
                       std::span<const Measurement> meas,
                       double family_weight);

/// Same structure with second-derivative basis rows.
void add_acceleration_cost(NormalEquations& ne, const TimeGrid& grid,
                           std::span<const Measurement> meas,
                           double family_weight);

/// Split position cost: the residual is rotated by the measurement's psi_ref
/// into longitudinal (along heading) and lateral (across) components that are
/// weighted separately. The rotation couples the x and y blocks. Effective
/// weights are lon_weight * m.c_lon * m.c and lat_weight * m.c_lat * m.c.
void add_lonlat_position_cost(NormalEquations& ne, const TimeGrid& grid,
                              std::span<const Measurement> meas,
                              double lon_weight, double lat_weight);

/// Heading-direction cost: velocity at a measured heading's time may only
/// point along that heading. Per measurement adds one homogeneous row:
/// tan(psi) vx(t) - vy(t) when |sin psi| <= |cos psi| (ties use this branch),
/// else -vx(t) + cot(psi) vy(t). b is untouched.
void add_heading_direction_cost(NormalEquations& ne, const TimeGrid& grid,
                                std::span<const Measurement> meas,
                                double family_weight);

/// Detects maximal intervals of duration >= t_stop where the estimated speed
/// stays below v_stop. Speeds come from velocity measurements when present,
/// otherwise from position differences (a short central difference combined
/// with a windowed slope fit, taking the smaller of the two, which keeps the
/// noise floor low without smearing stop edges). Fewer than 3 position
/// samples and no velocity data yields an empty result.
std::vector<TimeInterval> detect_standstill(const MeasurementSet& meas,
                                            double v_stop, double t_stop);

/// Penalizes vx(t_k)^2 + vy(t_k)^2 at every grid knot inside a standstill
/// interval with weight c.
void add_zero_velocity_regularization(NormalEquations& ne,
                                      const TimeGrid& grid,
                                      std::span<const TimeInterval> intervals,
                                      double c);

/// Adds lambda to the diagonal entries of all acceleration weights (basis
/// index >= 2 in both blocks), shrinking accelerations toward zero.
void add_acceleration_regularization(NormalEquations& ne, const TimeGrid& grid,
                                     double lambda);

/// Assembles the full system over the given grid, dispatching every active
/// cost family per the config. Throws UnanchoredProblemError when the set has
/// no position-type measurement (nothing would pin the constant mode).
NormalEquations assemble(const MeasurementSet& meas, const FitConfig& config,
                         const TimeGrid& grid);

/// Convenience overload building the grid with grid_for.
NormalEquations assemble(const MeasurementSet& meas, const FitConfig& config);

}  // namespace physpline
