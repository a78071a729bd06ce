#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "physpline/config.hpp"
#include "physpline/costs.hpp"
#include "physpline/measurement.hpp"
#include "physpline/model.hpp"

namespace physpline {

/// Residual summary of one cost family against the fitted model, over the
/// original measurements.
struct FamilyResidual {
  std::string family;
  std::size_t count = 0;
  double rms = 0.0;
  double max_abs = 0.0;
};

struct FitReport {
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
  double heading_seconds = 0.0;
  std::size_t measurement_count = 0;
  std::size_t knot_count = 0;
  bool heading_fitted = false;
  bool second_pass = false;
  std::size_t skipped_heading_accel_samples = 0;
  std::vector<TimeInterval> standstill;
  std::vector<FamilyResidual> residuals;
};

struct FitResult {
  PhysicalSpline spline;
  FitReport report;
};

/// Fits the trajectory end to end:
///  1. assembles and solves the Cartesian system;
///  2. when heading measurements exist (or two_pass asks for it), fits the
///     heading model from those measurements plus velocity/acceleration
///     samples taken from the Cartesian fit at the grid knots; without any
///     heading measurements the fit is seeded with the course at moving
///     knots;
///  3. with two_pass, refits the Cartesian system using the fitted heading:
///     plain positions become lon/lat split positions (weights c_lon/c_lat)
///     and the heading-direction cost, when enabled, runs on headings sampled
///     from the heading model at the knots.
///
/// Without two_pass, use_lonlat_split converts plain positions using raw
/// heading measurements interpolated to each position's time (explicit
/// psi_ref columns always win; they arrive as split positions already).
FitResult fit_trajectory(const MeasurementSet& meas, const FitConfig& config,
                         bool two_pass = false);

/// Residual summary of a fitted spline against a measurement set.
std::vector<FamilyResidual> residual_summary(const PhysicalSpline& spline,
                                             const MeasurementSet& meas);

}  // namespace physpline
