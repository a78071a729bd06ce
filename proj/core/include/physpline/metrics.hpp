#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "physpline/io.hpp"

namespace physpline {

struct ErrorStats {
  std::size_t count = 0;
  double rmse = 0.0;
  double max_abs = 0.0;
};

/// Error statistics of one comparison window. lon/lat need the truth heading
/// and stay empty (count 0) without it; speed needs velocity data on both
/// sides; heading needs psi on both sides.
struct MetricSet {
  ErrorStats position;
  ErrorStats lon;
  ErrorStats lat;
  ErrorStats speed;
  ErrorStats heading;
};

struct EvalReport {
  /// Overlap of the two time ranges, absolute seconds.
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t compared = 0;

  MetricSet full;
  /// Estimates more than edge_window from either end of the overlap.
  MetricSet interior;
  /// The first/last edge_window of the overlap, where fits degrade for lack
  /// of surrounding data.
  MetricSet edges;
};

/// Compares estimate rows against linearly interpolated truth rows over the
/// overlap of their time ranges (angles interpolate on the circle). Throws
/// ArgumentError when the ranges do not overlap or either input is empty.
EvalReport evaluate_tracks(const std::vector<TrackRow>& estimate,
                           const std::vector<TrackRow>& truth,
                           double edge_window = 1.0);

/// Human-readable table.
std::string format_report_text(const EvalReport& report);

/// Machine-readable lines: window,metric,rmse,max,count.
std::string format_report_csv(const EvalReport& report);

}  // namespace physpline
