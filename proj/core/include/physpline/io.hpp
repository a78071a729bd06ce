#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physpline/config.hpp"
#include "physpline/measurement.hpp"
#include "physpline/model.hpp"

namespace physpline {

/// One CSV row of a track or state file; absent cells stay empty. Angles are
/// radians throughout, never degrees.
struct TrackRow {
  double t = 0.0;
  std::optional<double> x, y;
  std::optional<double> vx, vy;
  std::optional<double> ax, ay;
  std::optional<double> speed;
  std::optional<double> psi;
  std::optional<double> psi_ref;
};

/// Reads a measurement CSV. The header names the columns; recognized ones are
/// t (required), x, y, vx, vy, ax, ay, psi, the per-row weights c_pos, c_vel,
/// c_acc, c_psi, and the split-position columns psi_ref, c_lon, c_lat.
/// Unknown columns are ignored. An empty cell means the signal is absent in
/// that row; a half pair (x without y and the like) is a format error. Rows
/// may be unsorted. Times are shifted so the earliest row lands at t = 0;
/// the shift is kept in the returned set.
///
/// Throws IoError when the file cannot be read, ParseError for malformed
/// content (row and column reported), UnanchoredProblemError when no row has
/// positions.
MeasurementSet load_track(const std::filesystem::path& path);

/// Reads any CSV with a t column plus a subset of x, y, vx, vy, ax, ay,
/// speed, psi; other columns are ignored. Used for truth/estimate comparison.
std::vector<TrackRow> load_states(const std::filesystem::path& path);

/// Writes rows as CSV. Only columns present in at least one row are emitted.
void write_track(const std::filesystem::path& path,
                 std::span<const TrackRow> rows);

/// Writes evaluated states as CSV with columns t,x,y,vx,vy,ax,ay,speed,psi.
/// Timestamps are restored to absolute time via t_offset. psi comes from the
/// heading model when given, else from the course; the cell stays empty where
/// neither is defined.
void write_states(const std::filesystem::path& path,
                  std::span<const KinematicState> states, double t_offset,
                  const HeadingSpline* heading = nullptr);

struct LoadedModel {
  PhysicalSpline spline;
  FitConfig config;
};

/// Saves a fitted spline (grid, weight blocks, optional heading model, time
/// offset) together with the config that produced it, as a small versioned
/// text file. Values use 17 significant digits, so reloading reproduces
/// evaluations to the last bit or near it.
void save_model(const std::filesystem::path& path, const PhysicalSpline& spline,
                const FitConfig& config);

/// Throws ParseError on version mismatch or truncated/garbled content.
LoadedModel load_model(const std::filesystem::path& path);

/// Parses a flat key-value config document: one "key value" per line, '#'
/// starts a comment, unknown keys are errors. Keys mirror the FitConfig
/// fields. All keys optional; missing ones keep their defaults.
FitConfig parse_config_text(const std::string& text);

/// parse_config_text on a file's contents.
FitConfig load_config(const std::filesystem::path& path);

}  // namespace physpline
