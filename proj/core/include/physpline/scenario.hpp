#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "physpline/io.hpp"

namespace physpline {

/// Synthetic benchmark tracks with known ground truth.
enum class Scenario {
  /// Constant-speed circle whose recorded positions carry a radial sine
  /// corruption; the true heading is recorded alongside.
  circle_sine,
  /// Straight line whose recorded x jumps by a fixed offset at mid-track;
  /// rows carry psi_ref = 0 so the fit can split lon/lat errors.
  lon_jump,
  /// Constant-acceleration motion x(t) = 1 + 2t + 1.5t^2, y = 0.
  const_accel,
  /// Object resting at the origin; truth heading is undefined.
  standstill,
  /// Straight segment, 90 degree arc, straight segment; noisy heading rows.
  turn
};

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

struct ScenarioParams {
  double rate_hz = 10.0;
  /// 0 picks the scenario default (full lap for circle_sine, phase sum for
  /// turn, 10 s otherwise).
  double duration = 0.0;
  double noise_pos = 0.0;  // m, standard deviation
  double noise_psi = 0.0;  // rad
  std::uint64_t seed = 1;

  // circle_sine
  double radius = 20.0;     // m
  double speed = 5.0;       // m/s, also the turn scenario's speed
  double sine_amp = 0.5;    // m
  double sine_freq = 1.0;   // Hz

  // lon_jump
  double jump_size = 2.0;    // m
  double jump_speed = 10.0;  // m/s

  // turn
  double turn_radius = 10.0;       // m
  double straight_duration = 4.0;  // s per straight phase
};

struct SyntheticTrack {
  std::vector<TrackRow> truth;
  std::vector<TrackRow> corrupted;
};

/// Generates ground truth and the corrupted measurement rows. Deterministic:
/// same scenario, params, and seed give identical values.
SyntheticTrack synthesize(Scenario s, const ScenarioParams& params);

}  // namespace physpline
