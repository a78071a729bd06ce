#include "physpline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "physpline/angles.hpp"
#include "physpline/errors.hpp"

namespace physpline {

namespace {

struct Accumulator {
  std::size_t count = 0;
  double sum_sq = 0.0;
  double max_abs = 0.0;

  void add(double err) {
    ++count;
    sum_sq += err * err;
    max_abs = std::max(max_abs, std::abs(err));
  }

  ErrorStats finish() const {
    ErrorStats s;
    s.count = count;
    s.max_abs = max_abs;
    s.rmse = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;
    return s;
  }
};

struct MetricAccumulators {
  Accumulator position, lon, lat, speed, heading;

  MetricSet finish() const {
    return {position.finish(), lon.finish(), lat.finish(), speed.finish(),
            heading.finish()};
  }
};

// Truth values interpolated to one estimate time.
struct TruthSample {
  std::optional<double> x, y;
  std::optional<double> speed;
  std::optional<double> psi;
};

std::optional<double> lerp_field(const TrackRow& a, const TrackRow& b,
                                 std::optional<double> TrackRow::* field,
                                 double s) {
  const auto& va = a.*field;
  const auto& vb = b.*field;
  if (!va || !vb) return std::nullopt;
  return *va + s * (*vb - *va);
}

std::optional<double> row_speed(const TrackRow& r) {
  if (r.speed) return r.speed;
  if (r.vx && r.vy) return std::hypot(*r.vx, *r.vy);
  return std::nullopt;
}

TruthSample interpolate_truth(const std::vector<TrackRow>& truth, double t) {
  const auto it = std::lower_bound(
      truth.begin(), truth.end(), t,
      [](const TrackRow& row, double value) { return row.t < value; });

  const TrackRow* a = nullptr;
  const TrackRow* b = nullptr;
  double s = 0.0;
  if (it == truth.begin()) {
    a = b = &truth.front();
  } else if (it == truth.end()) {
    a = b = &truth.back();
  } else {
    a = &*(it - 1);
    b = &*it;
    const double span = b->t - a->t;
    s = span > 0.0 ? (t - a->t) / span : 0.0;
  }

  TruthSample out;
  out.x = lerp_field(*a, *b, &TrackRow::x, s);
  out.y = lerp_field(*a, *b, &TrackRow::y, s);

  const auto sa = row_speed(*a);
  const auto sb = row_speed(*b);
  if (sa && sb) out.speed = *sa + s * (*sb - *sa);

  if (a->psi && b->psi) {
    out.psi = wrap_angle(*a->psi + s * angle_difference(*b->psi, *a->psi));
  }
  return out;
}

}  // namespace

EvalReport evaluate_tracks(const std::vector<TrackRow>& estimate,
                           const std::vector<TrackRow>& truth,
                           double edge_window) {
  if (estimate.empty() || truth.empty()) {
    throw ArgumentError("evaluate_tracks: empty input");
  }
  const double t_begin = std::max(estimate.front().t, truth.front().t);
  const double t_end = std::min(estimate.back().t, truth.back().t);
  if (!(t_begin <= t_end)) {
    throw ArgumentError("evaluate_tracks: time ranges do not overlap");
  }

  MetricAccumulators full, interior, edges;
  std::size_t compared = 0;

  for (const TrackRow& est : estimate) {
    if (est.t < t_begin || est.t > t_end) continue;
    ++compared;
    const TruthSample ref = interpolate_truth(truth, est.t);
    const bool on_edge =
        est.t <= t_begin + edge_window || est.t >= t_end - edge_window;
    MetricAccumulators& window = on_edge ? edges : interior;

    const auto add = [&](Accumulator MetricAccumulators::* acc, double err) {
      (full.*acc).add(err);
      (window.*acc).add(err);
    };

    if (est.x && est.y && ref.x && ref.y) {
      const double dx = *est.x - *ref.x;
      const double dy = *est.y - *ref.y;
      add(&MetricAccumulators::position, std::hypot(dx, dy));
      if (ref.psi) {
        const double c = std::cos(*ref.psi);
        const double s = std::sin(*ref.psi);
        add(&MetricAccumulators::lon, c * dx + s * dy);
        add(&MetricAccumulators::lat, -s * dx + c * dy);
      }
    }
    const auto est_speed = row_speed(est);
    if (est_speed && ref.speed) {
      add(&MetricAccumulators::speed, *est_speed - *ref.speed);
    }
    if (est.psi && ref.psi) {
      add(&MetricAccumulators::heading, angle_difference(*est.psi, *ref.psi));
    }
  }

  EvalReport report;
  report.t_begin = t_begin;
  report.t_end = t_end;
  report.compared = compared;
  report.full = full.finish();
  report.interior = interior.finish();
  report.edges = edges.finish();
  return report;
}

namespace {

constexpr const char* kWindowNames[] = {"full", "interior", "edges"};
constexpr const char* kMetricNames[] = {"position", "lon", "lat", "speed",
                                        "heading"};

const ErrorStats& pick_metric(const MetricSet& set, std::size_t i) {
  switch (i) {
    case 0: return set.position;
    case 1: return set.lon;
    case 2: return set.lat;
    case 3: return set.speed;
    default: return set.heading;
  }
}

const MetricSet& pick_window(const EvalReport& r, std::size_t i) {
  switch (i) {
    case 0: return r.full;
    case 1: return r.interior;
    default: return r.edges;
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string format_report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "overlap [" << num(report.t_begin) << ", " << num(report.t_end)
      << "] s, " << report.compared << " samples compared\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-9s %-9s %12s %12s %9s\n", "window",
                "metric", "rmse", "max", "samples");
  out << line;
  for (std::size_t w = 0; w < 3; ++w) {
    const MetricSet& set = pick_window(report, w);
    for (std::size_t m = 0; m < 5; ++m) {
      const ErrorStats& stats = pick_metric(set, m);
      if (stats.count == 0) {
        std::snprintf(line, sizeof(line), "%-9s %-9s %12s %12s %9s\n",
                      kWindowNames[w], kMetricNames[m], "n/a", "n/a", "0");
      } else {
        std::snprintf(line, sizeof(line), "%-9s %-9s %12s %12s %9zu\n",
                      kWindowNames[w], kMetricNames[m],
                      num(stats.rmse).c_str(), num(stats.max_abs).c_str(),
                      stats.count);
      }
      out << line;
    }
  }
  return out.str();
}

std::string format_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "window,metric,rmse,max,count\n";
  char buf[32];
  for (std::size_t w = 0; w < 3; ++w) {
    const MetricSet& set = pick_window(report, w);
    for (std::size_t m = 0; m < 5; ++m) {
      const ErrorStats& stats = pick_metric(set, m);
      out << kWindowNames[w] << ',' << kMetricNames[m] << ',';
      std::snprintf(buf, sizeof(buf), "%.9g", stats.rmse);
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.9g", stats.max_abs);
      out << buf << ',' << stats.count << '\n';
    }
  }
  return out.str();
}

}  // namespace physpline
