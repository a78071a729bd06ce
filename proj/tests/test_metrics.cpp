#include <cmath>
#include <doctest.h>
#include <vector>

#include "physpline/errors.hpp"
#include "physpline/metrics.hpp"

using namespace physpline;

namespace {

std::vector<TrackRow> line_track(double t0, double t1, double dt,
                                 double x_offset = 0.0,
                                 bool with_velocity = true) {
  std::vector<TrackRow> rows;
  for (int i = 0; t0 + i * dt <= t1 + 1e-9; ++i) {
    TrackRow r;
    r.t = t0 + i * dt;
    r.x = 2.0 * r.t + x_offset;
    r.y = 1.0;
    if (with_velocity) {
      r.vx = 2.0;
      r.vy = 0.0;
    }
    r.psi = 0.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("identical tracks give zero error") {
  const auto truth = line_track(0.0, 10.0, 0.1);
  const EvalReport rep = evaluate_tracks(truth, truth);
  CHECK(rep.t_begin == 0.0);
  CHECK(rep.t_end == 10.0);
  CHECK(rep.compared == 101);
  CHECK(rep.full.position.count == 101);
  CHECK(rep.full.position.rmse == 0.0);
  CHECK(rep.full.position.max_abs == 0.0);
  CHECK(rep.full.speed.rmse == 0.0);
  CHECK(rep.full.heading.rmse == 0.0);
}

TEST_CASE("a constant offset appears as position, lon and lat errors") {
  const auto truth = line_track(0.0, 10.0, 0.1);
  // Offset 1 m in x: with truth heading 0, that is purely longitudinal.
  const auto est = line_track(0.0, 10.0, 0.1, 1.0);
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.full.position.rmse == doctest::Approx(1.0));
  CHECK(rep.full.position.max_abs == doctest::Approx(1.0));
  CHECK(rep.full.lon.rmse == doctest::Approx(1.0));
  CHECK(rep.full.lat.rmse == doctest::Approx(0.0));
  CHECK(rep.full.speed.rmse == doctest::Approx(0.0));
}

TEST_CASE("lateral offsets land in the lat channel for heading pi/2") {
  // Truth moves along +y (heading pi/2); estimate shifted in x is lateral.
  std::vector<TrackRow> truth, est;
  for (int i = 0; i <= 50; ++i) {
    TrackRow r;
    r.t = 0.1 * i;
    r.x = 0.0;
    r.y = 3.0 * r.t;
    r.psi = M_PI_2;
    truth.push_back(r);
    r.x = 0.5;
    est.push_back(r);
  }
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.full.lat.rmse == doctest::Approx(0.5));
  CHECK(rep.full.lon.rmse == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("truth is interpolated between samples") {
  const auto truth = line_track(0.0, 10.0, 1.0);  // coarse truth
  std::vector<TrackRow> est;
  TrackRow r;
  r.t = 2.5;  // between truth samples; the line interpolates exactly
  r.x = 5.0;
  r.y = 1.0;
  est.push_back(r);
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.compared == 1);
  CHECK(rep.full.position.max_abs < 1e-12);
}

TEST_CASE("heading errors interpolate on the circle") {
  // Truth heading crosses the pi wrap; estimate equals truth shifted 0.1 rad.
  std::vector<TrackRow> truth, est;
  for (int i = 0; i <= 40; ++i) {
    TrackRow r;
    r.t = 0.1 * i;
    r.x = 0.0;
    r.y = 0.0;
    const double psi = M_PI - 0.5 + 0.25 * r.t;  // passes through pi
    r.psi = std::remainder(psi, 2.0 * M_PI);
    truth.push_back(r);
    r.psi = std::remainder(psi + 0.1, 2.0 * M_PI);
    est.push_back(r);
  }
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.full.heading.rmse == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(rep.full.heading.max_abs == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("edge and interior windows partition the overlap") {
  const auto truth = line_track(0.0, 10.0, 0.1);
  const auto est = line_track(0.0, 10.0, 0.1, 0.25);
  const EvalReport rep = evaluate_tracks(est, truth, 1.0);
  CHECK(rep.full.position.count ==
        rep.interior.position.count + rep.edges.position.count);
  // Edge windows are [0,1] and [9,10]: 11 + 11 samples.
  CHECK(rep.edges.position.count == 22);
  CHECK(rep.interior.position.count == 79);
}

TEST_CASE("evaluation restricts to the overlapping time range") {
  const auto truth = line_track(0.0, 10.0, 0.1);
  const auto est = line_track(8.0, 15.0, 0.1);
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.t_begin == doctest::Approx(8.0));
  CHECK(rep.t_end == doctest::Approx(10.0));
  CHECK(rep.compared == 21);

  const auto far = line_track(20.0, 25.0, 0.1);
  CHECK_THROWS_AS(evaluate_tracks(far, truth), ArgumentError);
  CHECK_THROWS_AS(evaluate_tracks({}, truth), ArgumentError);
}

TEST_CASE("missing channels leave their stats empty") {
  // No velocity, no psi: only position stats are populated.
  const auto truth = line_track(0.0, 5.0, 0.1, 0.0, false);
  std::vector<TrackRow> bare_truth = truth;
  for (TrackRow& r : bare_truth) r.psi.reset();
  const EvalReport rep = evaluate_tracks(bare_truth, bare_truth);
  CHECK(rep.full.position.count > 0);
  CHECK(rep.full.speed.count == 0);
  CHECK(rep.full.heading.count == 0);
  CHECK(rep.full.lon.count == 0);
  CHECK(rep.full.lat.count == 0);
}

TEST_CASE("speed falls back to the speed column") {
  std::vector<TrackRow> truth, est;
  for (int i = 0; i <= 20; ++i) {
    TrackRow r;
    r.t = 0.1 * i;
    r.x = 0.0;
    r.y = 0.0;
    r.speed = 3.0;
    truth.push_back(r);
    r.speed = 3.5;
    est.push_back(r);
  }
  const EvalReport rep = evaluate_tracks(est, truth);
  CHECK(rep.full.speed.count == 21);
  CHECK(rep.full.speed.rmse == doctest::Approx(0.5));
}

TEST_CASE("report formatting contains the numbers") {
  const auto truth = line_track(0.0, 5.0, 0.1);
  const auto est = line_track(0.0, 5.0, 0.1, 1.0);
  const EvalReport rep = evaluate_tracks(est, truth);

  const std::string text = format_report_text(rep);
  CHECK(text.find("position") != std::string::npos);
  CHECK(text.find("rmse") != std::string::npos);

  const std::string csv = format_report_csv(rep);
  CHECK(csv.find("full,position,") != std::string::npos);
  CHECK(csv.find("interior,") != std::string::npos);
  CHECK(csv.rfind("window,metric,rmse,max,count", 0) == 0);
}
