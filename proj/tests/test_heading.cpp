#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <functional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "physpline/angles.hpp"
#include "physpline/basis.hpp"
#include "physpline/errors.hpp"
#include "physpline/heading.hpp"
#include "physpline/heading_spline.hpp"
#include "physpline/solver.hpp"

using namespace physpline;

namespace {

std::vector<Measurement> heading_samples(double t_end, double dt,
                                         const std::function<double(double)>& psi) {
  std::vector<Measurement> out;
  for (int i = 0; i * dt <= t_end + 1e-9; ++i) {
    const double t = std::min(i * dt, t_end);
    out.push_back(Measurement::heading(t, psi(t)));
  }
  return out;
}

}  // namespace

TEST_CASE("HeadingSpline validates block sizes") {
  const TimeGrid g = TimeGrid::uniform(1.0, 2.0);
  const auto n = static_cast<Eigen::Index>(g.basis_count());
  CHECK_NOTHROW(HeadingSpline(g, Eigen::VectorXd::Zero(n),
                              Eigen::VectorXd::Zero(n)));
  CHECK_THROWS_AS(HeadingSpline(g, Eigen::VectorXd::Zero(n - 1),
                                Eigen::VectorXd::Zero(n)),
                  ArgumentError);
}

TEST_CASE("reconstruct_heading is atan2 of the component splines") {
  const TimeGrid g = TimeGrid::uniform(1.0, 2.0);
  const auto n = static_cast<Eigen::Index>(g.basis_count());

  // Constant components in each quadrant.
  const double angles[] = {0.1, 2.0, -2.5, -0.3, M_PI};
  for (const double a : angles) {
    Eigen::VectorXd cb = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sb = Eigen::VectorXd::Zero(n);
    cb[0] = 0.8 * std::cos(a);
    sb[0] = 0.8 * std::sin(a);
    const HeadingSpline hs(g, cb, sb);
    CHECK(reconstruct_heading(hs, 0.7) == doctest::Approx(a));
    CHECK(hs.magnitude(0.7) == doctest::Approx(0.8));
  }
}

TEST_CASE("degenerate components make the heading undefined") {
  const TimeGrid g = TimeGrid::uniform(1.0, 2.0);
  const auto n = static_cast<Eigen::Index>(g.basis_count());
  const HeadingSpline hs(g, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));
  CHECK_THROWS_AS(reconstruct_heading(hs, 1.0), UndefinedHeadingError);
  CHECK(!try_reconstruct_heading(hs, 1.0).has_value());
}

TEST_CASE("angle helpers wrap into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(2 * M_PI + 0.25) == doctest::Approx(0.25));
  CHECK(angle_difference(0.1, -0.1) == doctest::Approx(0.2));
  CHECK(angle_difference(M_PI - 0.05, -M_PI + 0.05) == doctest::Approx(-0.1));
}

TEST_CASE("heading measurement cost targets cos and sin independently") {
  const TimeGrid g({0.0, 1.0});
  const std::size_t dim = 2 * g.basis_count();
  NormalEquations ne(dim);
  const std::vector<Measurement> m = {Measurement::heading(0.0, M_PI / 3.0)};
  add_heading_measurement_cost(ne, g, m, 2.0);
  ne.symmetrize();

  // Basis row at t=0 is [1,0,0,0]; cos block first.
  CHECK(ne.Q(0, 0) == 2.0);
  CHECK(ne.Q(4, 4) == 2.0);
  CHECK(ne.b(0) == doctest::Approx(2.0 * 0.5));
  CHECK(ne.b(4) == doctest::Approx(2.0 * std::sqrt(3.0) / 2.0));
}

TEST_CASE("fitting a constant heading recovers its components") {
  const double psi = M_PI / 3.0;
  const auto meas = heading_samples(4.0, 0.25, [&](double) { return psi; });
  const TimeGrid g = TimeGrid::uniform(1.0, 4.0);
  const HeadingSpline hs =
      fit_heading(g, meas, {}, {}, HeadingFitConfig{});
  for (const double t : {0.0, 1.3, 2.2, 4.0}) {
    const HeadingComponents c = hs.components(t);
    CHECK(std::abs(c.cos_value - 0.5) < 1e-6);
    CHECK(std::abs(c.sin_value - std::sqrt(3.0) / 2.0) < 1e-6);
    CHECK(std::abs(reconstruct_heading(hs, t) - psi) < 1e-6);
  }
}

TEST_CASE("wrap-around headings fit cleanly through the atan2 form") {
  // Raw angles jump between pi and -pi; the component splines do not.
  const auto psi = [](double t) { return wrap_angle(M_PI - 0.3 + 0.2 * t); };
  const auto meas = heading_samples(6.0, 0.1, psi);
  const TimeGrid g = TimeGrid::uniform(0.5, 6.0);
  const HeadingSpline hs = fit_heading(g, meas, {}, {}, HeadingFitConfig{});
  for (double t = 0.3; t < 6.0; t += 0.37) {
    CHECK(std::abs(angle_difference(reconstruct_heading(hs, t), psi(t))) <
          1e-3);
  }
}

TEST_CASE("velocity heading cost is zero along the motion direction") {
  const TimeGrid g = TimeGrid::uniform(0.5, 2.0);
  const std::size_t dim = 2 * g.basis_count();
  const double psi = 0.8;

  std::vector<VelocitySample> samples;
  for (double t = 0.0; t <= 2.0; t += 0.25) {
    samples.push_back({t, 3.0 * std::cos(psi), 3.0 * std::sin(psi)});
  }
  NormalEquations ne(dim);
  add_velocity_heading_cost(ne, g, samples, 1.0);
  ne.symmetrize();
  CHECK(ne.b.isZero(0.0));

  // Constant component weights along psi annihilate the cost.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const auto n = static_cast<Eigen::Index>(g.basis_count());
  w(0) = std::cos(psi);
  w(n) = std::sin(psi);
  CHECK(std::abs(w.dot(ne.Q * w)) < 1e-12);

  Eigen::VectorXd perp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  perp(0) = -std::sin(psi);
  perp(n) = std::cos(psi);
  CHECK(perp.dot(ne.Q * perp) > 1.0);
}

TEST_CASE("velocity heading cost matches the dyadic oracle") {
  const TimeGrid g({0.0, 0.7, 1.6});
  const std::size_t dim = 2 * g.basis_count();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> time_dist(0.0, 1.6);
  std::normal_distribution<double> val(0.0, 2.0);

  std::vector<VelocitySample> samples;
  const std::size_t count = 9;
  Eigen::MatrixXd rows(count, dim);
  Eigen::VectorXd weights(count);
  const auto n = static_cast<Eigen::Index>(g.basis_count());
  for (std::size_t i = 0; i < count; ++i) {
    VelocitySample s{time_dist(rng), val(rng), val(rng)};
    samples.push_back(s);
    const Eigen::RowVectorXd f = basis_row(g, s.t, Deriv::position);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dim);
    row.head(n) = -s.vy * f;
    row.tail(n) = s.vx * f;
    rows.row(static_cast<Eigen::Index>(i)) = row;
    weights(static_cast<Eigen::Index>(i)) = 1.3;
  }
  NormalEquations ne(dim);
  add_velocity_heading_cost(ne, g, samples, 1.3);
  ne.symmetrize();
  const Eigen::MatrixXd q_ref = oracles::gram_dyadic(rows, weights);
  CHECK((ne.Q - q_ref).cwiseAbs().maxCoeff() < 1e-12 * (1 + q_ref.norm()));
  CHECK(ne.b.isZero(0.0));
}

TEST_CASE("acceleration heading cost skips slow samples") {
  const TimeGrid g = TimeGrid::uniform(0.5, 2.0);
  NormalEquations ne(2 * g.basis_count());
  std::vector<AccelSample> samples = {
      {0.5, 1.0, 0.0, 2.0, 0.1},
      {1.0, 0.5, 0.0, 0.05, 0.0},  // below kMinHeadingFitSpeed
      {1.5, 0.0, 1.0, 0.0, 0.0},   // standing still
  };
  const std::size_t skipped =
      add_acceleration_heading_cost(ne, g, samples, 1.0);
  CHECK(skipped == 2);
  CHECK(!ne.Q.isZero(0.0));
}

TEST_CASE("acceleration heading cost matches the dyadic oracle") {
  const TimeGrid g({0.0, 0.8, 1.5, 2.0});
  const std::size_t dim = 2 * g.basis_count();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> time_dist(0.0, 2.0);
  std::normal_distribution<double> val(0.0, 1.5);
  std::uniform_real_distribution<double> speed(0.5, 8.0);

  std::vector<AccelSample> samples;
  const std::size_t count = 7;
  Eigen::MatrixXd rows(2 * count, dim);
  Eigen::VectorXd weights(2 * count);
  Eigen::VectorXd targets(2 * count);
  const auto n = static_cast<Eigen::Index>(g.basis_count());
  for (std::size_t i = 0; i < count; ++i) {
    AccelSample s;
    s.t = time_dist(rng);
    s.ax = val(rng);
    s.ay = val(rng);
    s.v = speed(rng);
    s.v_dot = val(rng);
    samples.push_back(s);

    const Eigen::RowVectorXd f0 = basis_row(g, s.t, Deriv::position);
    const Eigen::RowVectorXd f1 = basis_row(g, s.t, Deriv::velocity);
    const auto k = static_cast<Eigen::Index>(2 * i);
    Eigen::RowVectorXd row_cos = Eigen::RowVectorXd::Zero(dim);
    row_cos.head(n) = s.v * f1 + s.v_dot * f0;
    rows.row(k) = row_cos;
    Eigen::RowVectorXd row_sin = Eigen::RowVectorXd::Zero(dim);
    row_sin.tail(n) = s.v * f1 + s.v_dot * f0;
    rows.row(k + 1) = row_sin;
    weights(k) = weights(k + 1) = 0.6;
    targets(k) = s.ax;
    targets(k + 1) = s.ay;
  }

  NormalEquations ne(dim);
  const std::size_t skipped =
      add_acceleration_heading_cost(ne, g, samples, 0.6);
  ne.symmetrize();
  CHECK(skipped == 0);
  const Eigen::MatrixXd q_ref = oracles::gram_dyadic(rows, weights);
  const Eigen::VectorXd b_ref = oracles::rhs_dyadic(rows, weights, targets);
  CHECK((ne.Q - q_ref).cwiseAbs().maxCoeff() < 1e-12 * (1 + q_ref.norm()));
  CHECK((ne.b - b_ref).cwiseAbs().maxCoeff() < 1e-12 * (1 + b_ref.norm()));
}

TEST_CASE("heading from velocities alone follows a circle tangent") {
  // Constant-rate turn: velocity direction rotates; heading measurements only
  // at the two endpoints anchor the scale.
  const double omega = 0.4;
  const double v = 5.0;
  const double t_end = 6.0;
  std::vector<VelocitySample> vel;
  std::vector<AccelSample> acc;
  for (double t = 0.0; t <= t_end + 1e-9; t += 0.1) {
    const double psi = omega * t;
    vel.push_back({t, v * std::cos(psi), v * std::sin(psi)});
    acc.push_back({t, -v * omega * std::sin(psi), v * omega * std::cos(psi),
                   v, 0.0});
  }
  const std::vector<Measurement> anchor = {
      Measurement::heading(0.0, 0.0),
      Measurement::heading(t_end, omega * t_end)};

  const TimeGrid g = TimeGrid::uniform(0.5, t_end);
  const HeadingSpline hs = fit_heading(g, anchor, vel, acc,
                                       HeadingFitConfig{});
  for (double t = 1.0; t <= t_end - 1.0; t += 0.3) {
    CHECK(std::abs(angle_difference(reconstruct_heading(hs, t), omega * t)) <
          0.01);
  }

  // Heading rate from the components matches omega: d psi/dt =
  // (cos * sin_rate - sin * cos_rate) / magnitude^2.
  for (const double t : {1.5, 3.0, 4.5}) {
    const HeadingComponents c = hs.components(t);
    const double mag2 = c.cos_value * c.cos_value + c.sin_value * c.sin_value;
    const double rate =
        (c.cos_value * c.sin_rate - c.sin_value * c.cos_rate) / mag2;
    CHECK(rate == doctest::Approx(omega).epsilon(0.01));
  }
}

TEST_CASE("fit_heading requires an anchor") {
  const TimeGrid g = TimeGrid::uniform(0.5, 2.0);
  CHECK_THROWS_AS(fit_heading(g, {}, {}, {}, HeadingFitConfig{}),
                  UnanchoredProblemError);

  // Zero-speed velocity samples do not anchor anything either.
  const std::vector<VelocitySample> still = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(fit_heading(g, {}, still, {}, HeadingFitConfig{}),
                  UnanchoredProblemError);
}

TEST_CASE("heading fit is rotation equivariant") {
  const double shift = 1.1;
  const auto psi = [](double t) { return 0.3 * std::sin(t) + 0.5; };
  const auto meas = heading_samples(5.0, 0.2, psi);
  auto rotated = meas;
  for (Measurement& m : rotated) m.psi = wrap_angle(m.psi + shift);

  const TimeGrid g = TimeGrid::uniform(0.5, 5.0);
  const HeadingSpline a = fit_heading(g, meas, {}, {}, HeadingFitConfig{});
  const HeadingSpline b = fit_heading(g, rotated, {}, {}, HeadingFitConfig{});
  for (double t = 0.2; t < 5.0; t += 0.43) {
    const double da = reconstruct_heading(a, t);
    const double db = reconstruct_heading(b, t);
    CHECK(std::abs(angle_difference(db, da + shift)) < 1e-9);
  }
}

TEST_CASE("reconstructed heading is continuous across knots") {
  const auto psi = [](double t) { return 0.8 * std::sin(0.9 * t); };
  const auto meas = heading_samples(4.0, 0.1, psi);
  const TimeGrid g = TimeGrid::uniform(0.5, 4.0);
  const HeadingSpline hs = fit_heading(g, meas, {}, {}, HeadingFitConfig{});
  for (std::size_t k = 1; k + 1 < g.knot_count(); ++k) {
    const double t = g.knot(k);
    const double before = reconstruct_heading(hs, std::nextafter(t, -1.0));
    const double at = reconstruct_heading(hs, t);
    CHECK(std::abs(angle_difference(at, before)) < 1e-9);
  }
}
