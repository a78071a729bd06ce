#pragma once

#include <cstddef>
#include <vector>

namespace physpline {

enum class MeasurementKind {
  position,
  velocity,
  acceleration,
  heading,
  lonlat_position
};

/// One timestamped observation. The meaning of (x, y) follows the kind:
/// position in m, velocity in m/s, acceleration in m/s^2. Heading kinds carry
/// the angle psi in radians instead. Every measurement has an individual
/// weight c that multiplies the family-level weight from the fit config.
///
/// lonlat_position is a position whose residual is split into longitudinal and
/// lateral parts along a reference heading psi_ref, weighted separately by
/// c_lon and c_lat.
struct Measurement {
  double t = 0.0;
  MeasurementKind kind = MeasurementKind::position;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double c = 1.0;

  double psi_ref = 0.0;
  double c_lon = 1.0;
  double c_lat = 1.0;

  static Measurement position(double t, double x, double y, double c = 1.0);
  static Measurement velocity(double t, double vx, double vy, double c = 1.0);
  static Measurement acceleration(double t, double ax, double ay,
                                  double c = 1.0);
  static Measurement heading(double t, double psi, double c = 1.0);
  static Measurement lonlat_position(double t, double x, double y,
                                     double psi_ref, double c_lon = 1.0,
                                     double c_lat = 1.0, double c = 1.0);
};

/// A track's measurements, sorted by time. Times are track-relative: the
/// recorded timestamps were shifted by t_offset so the track starts at 0.
class MeasurementSet {
public:
  MeasurementSet() = default;

  /// Takes measurements that are already track-relative (all t >= 0).
  explicit MeasurementSet(std::vector<Measurement> measurements,
                          double t_offset = 0.0);

  /// Shifts recorded timestamps so the earliest measurement lands at t = 0
  /// and keeps the shift as t_offset.
  static MeasurementSet from_recorded(std::vector<Measurement> measurements);

  const std::vector<Measurement>& all() const { return measurements_; }
  double t_offset() const { return t_offset_; }
  bool empty() const { return measurements_.empty(); }
  std::size_t size() const { return measurements_.size(); }

  /// Largest track-relative time; 0 for an empty set.
  double end_time() const;

  bool has_kind(MeasurementKind kind) const;
  std::vector<Measurement> of_kind(MeasurementKind kind) const;

private:
  std::vector<Measurement> measurements_;
  double t_offset_ = 0.0;
};

}  // namespace physpline
