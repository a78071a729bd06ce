#include "physpline/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "physpline/angles.hpp"
#include "physpline/errors.hpp"

namespace physpline {

Scenario parse_scenario(const std::string& name) {
  if (name == "circle_sine") return Scenario::circle_sine;
  if (name == "lon_jump") return Scenario::lon_jump;
  if (name == "const_accel") return Scenario::const_accel;
  if (name == "standstill") return Scenario::standstill;
  if (name == "turn") return Scenario::turn;
  throw ArgumentError(
      "unknown scenario \"" + name +
      "\"; expected circle_sine, lon_jump, const_accel, standstill or turn");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::circle_sine: return "circle_sine";
    case Scenario::lon_jump: return "lon_jump";
    case Scenario::const_accel: return "const_accel";
    case Scenario::standstill: return "standstill";
    case Scenario::turn: return "turn";
  }
  throw ArgumentError("invalid scenario value");
}

namespace {

constexpr double kPi = std::numbers::pi;

struct TruthState {
  double x = 0.0, y = 0.0;
  double vx = 0.0, vy = 0.0;
  double ax = 0.0, ay = 0.0;
  std::optional<double> psi;
};

double default_duration(Scenario s, const ScenarioParams& p) {
  switch (s) {
    case Scenario::circle_sine:
      return 2.0 * kPi * p.radius / p.speed;
    case Scenario::turn:
      return 2.0 * p.straight_duration +
             0.5 * kPi * p.turn_radius / p.speed;
    default:
      return 10.0;
  }
}

TruthState circle_truth(double t, const ScenarioParams& p) {
  const double w = p.speed / p.radius;
  const double th = w * t;
  TruthState s;
  s.x = p.radius * std::cos(th);
  s.y = p.radius * std::sin(th);
  s.vx = -p.speed * std::sin(th);
  s.vy = p.speed * std::cos(th);
  s.ax = -p.speed * w * std::cos(th);
  s.ay = -p.speed * w * std::sin(th);
  s.psi = wrap_angle(th + 0.5 * kPi);
  return s;
}

TruthState lon_jump_truth(double t, const ScenarioParams& p) {
  TruthState s;
  s.x = p.jump_speed * t;
  s.vx = p.jump_speed;
  s.psi = 0.0;
  return s;
}

TruthState const_accel_truth(double t) {
  TruthState s;
  s.x = 1.0 + 2.0 * t + 1.5 * t * t;
  s.vx = 2.0 + 3.0 * t;
  s.ax = 3.0;
  s.psi = 0.0;
  return s;
}

TruthState turn_truth(double t, const ScenarioParams& p) {
  const double arc_duration = 0.5 * kPi * p.turn_radius / p.speed;
  const double t1 = p.straight_duration;
  const double t2 = t1 + arc_duration;
  TruthState s;
  if (t < t1) {
    s.x = p.speed * t;
    s.vx = p.speed;
    s.psi = 0.0;
    return s;
  }
  const double cx = p.speed * t1;
  const double cy = p.turn_radius;
  if (t < t2) {
    const double w = p.speed / p.turn_radius;
    const double phi = -0.5 * kPi + w * (t - t1);
    s.x = cx + p.turn_radius * std::cos(phi);
    s.y = cy + p.turn_radius * std::sin(phi);
    s.vx = -p.speed * std::sin(phi);
    s.vy = p.speed * std::cos(phi);
    s.ax = -p.speed * w * std::cos(phi);
    s.ay = -p.speed * w * std::sin(phi);
    s.psi = wrap_angle(phi + 0.5 * kPi);
    return s;
  }
  s.x = cx + p.turn_radius;
  s.y = cy + p.speed * (t - t2);
  s.vy = p.speed;
  s.psi = 0.5 * kPi;
  return s;
}

TruthState truth_at(Scenario scenario, double t, const ScenarioParams& p) {
  switch (scenario) {
    case Scenario::circle_sine: return circle_truth(t, p);
    case Scenario::lon_jump: return lon_jump_truth(t, p);
    case Scenario::const_accel: return const_accel_truth(t);
    case Scenario::standstill: return TruthState{};
    case Scenario::turn: return turn_truth(t, p);
  }
  throw ArgumentError("invalid scenario value");
}

void check_params(const ScenarioParams& p) {
  if (!(p.rate_hz > 0.0) || !std::isfinite(p.rate_hz)) {
    throw ArgumentError("rate_hz must be > 0");
  }
  if (p.duration < 0.0 || !std::isfinite(p.duration)) {
    throw ArgumentError("duration must be >= 0");
  }
  if (p.noise_pos < 0.0 || p.noise_psi < 0.0) {
    throw ArgumentError("noise levels must be >= 0");
  }
  if (!(p.radius > 0.0) || !(p.speed > 0.0) || !(p.turn_radius > 0.0) ||
      !(p.jump_speed > 0.0)) {
    throw ArgumentError("radius, speed and jump_speed must be > 0");
  }
}

}  // namespace

SyntheticTrack synthesize(Scenario scenario, const ScenarioParams& params) {
  check_params(params);
  const double duration = params.duration > 0.0
                              ? params.duration
                              : default_duration(scenario, params);
  const auto steps =
      static_cast<std::size_t>(std::llround(duration * params.rate_hz));

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto noise = [&](double sigma) { return sigma * gauss(rng); };

  SyntheticTrack track;
  track.truth.reserve(steps + 1);
  track.corrupted.reserve(steps + 1);

  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / params.rate_hz;
    const TruthState s = truth_at(scenario, t, params);

    TrackRow truth_row;
    truth_row.t = t;
    truth_row.x = s.x;
    truth_row.y = s.y;
    truth_row.vx = s.vx;
    truth_row.vy = s.vy;
    truth_row.ax = s.ax;
    truth_row.ay = s.ay;
    truth_row.psi = s.psi;
    track.truth.push_back(truth_row);

    TrackRow row;
    row.t = t;
    switch (scenario) {
      case Scenario::circle_sine: {
        // The corruption moves the point radially by a sine wave on top of
        // the measurement noise; the recorded heading stays the true one
        // (plus optional noise).
        const double r =
            params.radius +
            params.sine_amp * std::sin(2.0 * kPi * params.sine_freq * t);
        const double th = (params.speed / params.radius) * t;
        row.x = r * std::cos(th) + noise(params.noise_pos);
        row.y = r * std::sin(th) + noise(params.noise_pos);
        row.psi = wrap_angle(*s.psi + noise(params.noise_psi));
        break;
      }
      case Scenario::lon_jump: {
        const double step = (t >= 0.5 * duration) ? params.jump_size : 0.0;
        row.x = s.x + step + noise(params.noise_pos);
        row.y = s.y + noise(params.noise_pos);
        row.psi_ref = 0.0;
        break;
      }
      case Scenario::const_accel: {
        row.x = s.x + noise(params.noise_pos);
        row.y = s.y + noise(params.noise_pos);
        break;
      }
      case Scenario::standstill: {
        row.x = s.x + noise(params.noise_pos);
        row.y = s.y + noise(params.noise_pos);
        break;
      }
      case Scenario::turn: {
        row.x = s.x + noise(params.noise_pos);
        row.y = s.y + noise(params.noise_pos);
        row.psi = wrap_angle(*s.psi + noise(params.noise_psi));
        break;
      }
    }
    track.corrupted.push_back(row);
  }
  return track;
}

}  // namespace physpline
