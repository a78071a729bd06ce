#include "physpline/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "physpline/errors.hpp"

namespace physpline {

Measurement Measurement::position(double t, double x, double y, double c) {
  Measurement m;
  m.t = t;
  m.kind = MeasurementKind::position;
  m.x = x;
  m.y = y;
  m.c = c;
  return m;
}

Measurement Measurement::velocity(double t, double vx, double vy, double c) {
  Measurement m;
  m.t = t;
  m.kind = MeasurementKind::velocity;
  m.x = vx;
  m.y = vy;
  m.c = c;
  return m;
}

Measurement Measurement::acceleration(double t, double ax, double ay,
                                      double c) {
  Measurement m;
  m.t = t;
  m.kind = MeasurementKind::acceleration;
  m.x = ax;
  m.y = ay;
  m.c = c;
  return m;
}

Measurement Measurement::heading(double t, double psi, double c) {
  Measurement m;
  m.t = t;
  m.kind = MeasurementKind::heading;
  m.psi = psi;
  m.c = c;
  return m;
}

Measurement Measurement::lonlat_position(double t, double x, double y,
                                         double psi_ref, double c_lon,
                                         double c_lat, double c) {
  Measurement m;
  m.t = t;
  m.kind = MeasurementKind::lonlat_position;
  m.x = x;
  m.y = y;
  m.psi_ref = psi_ref;
  m.c_lon = c_lon;
  m.c_lat = c_lat;
  m.c = c;
  return m;
}

namespace {

void validate_measurement(const Measurement& m, std::size_t index) {
  const std::string where = "measurement " + std::to_string(index);
  if (!std::isfinite(m.t) || m.t < 0.0) {
    throw ArgumentError(where + ": time must be finite and >= 0, got " +
                        std::to_string(m.t));
  }
  if (!std::isfinite(m.c) || m.c < 0.0) {
    throw ArgumentError(where + ": weight must be finite and >= 0");
  }
  switch (m.kind) {
    case MeasurementKind::position:
    case MeasurementKind::velocity:
    case MeasurementKind::acceleration:
      if (!std::isfinite(m.x) || !std::isfinite(m.y)) {
        throw ArgumentError(where + ": values must be finite");
      }
      break;
    case MeasurementKind::heading:
      if (!std::isfinite(m.psi)) {
        throw ArgumentError(where + ": heading must be finite");
      }
      break;
    case MeasurementKind::lonlat_position:
      if (!std::isfinite(m.x) || !std::isfinite(m.y) ||
          !std::isfinite(m.psi_ref)) {
        throw ArgumentError(where + ": values must be finite");
      }
      if (!std::isfinite(m.c_lon) || m.c_lon < 0.0 ||
          !std::isfinite(m.c_lat) || m.c_lat < 0.0) {
        throw ArgumentError(where +
                            ": c_lon and c_lat must be finite and >= 0");
      }
      break;
  }
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<Measurement> measurements,
                               double t_offset)
    : measurements_(std::move(measurements)), t_offset_(t_offset) {
  if (!std::isfinite(t_offset_)) {
    throw ArgumentError("t_offset must be finite");
  }
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    validate_measurement(measurements_[i], i);
  }
  std::stable_sort(measurements_.begin(), measurements_.end(),
                   [](const Measurement& a, const Measurement& b) {
                     return a.t < b.t;
                   });
}

MeasurementSet MeasurementSet::from_recorded(
    std::vector<Measurement> measurements) {
  double t_min = 0.0;
  if (!measurements.empty()) {
    t_min = measurements.front().t;
    for (const Measurement& m : measurements) t_min = std::min(t_min, m.t);
  }
  for (Measurement& m : measurements) m.t -= t_min;
  return MeasurementSet(std::move(measurements), t_min);
}

double MeasurementSet::end_time() const {
  return measurements_.empty() ? 0.0 : measurements_.back().t;
}

bool MeasurementSet::has_kind(MeasurementKind kind) const {
  return std::any_of(measurements_.begin(), measurements_.end(),
                     [kind](const Measurement& m) { return m.kind == kind; });
}

std::vector<Measurement> MeasurementSet::of_kind(MeasurementKind kind) const {
  std::vector<Measurement> out;
  for (const Measurement& m : measurements_) {
    if (m.kind == kind) out.push_back(m);
  }
  return out;
}

}  // namespace physpline
