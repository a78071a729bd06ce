#include <cmath>
#include <doctest.h>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "physpline/basis.hpp"
#include "physpline/errors.hpp"
#include "physpline/grid.hpp"

using namespace physpline;

TEST_CASE("TimeGrid validates its knots") {
  CHECK_THROWS_AS(TimeGrid({}), ArgumentError);
  CHECK_THROWS_AS(TimeGrid({0.0}), ArgumentError);
  CHECK_THROWS_AS(TimeGrid({1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(TimeGrid({0.0, 2.0, 1.0}), ArgumentError);

  const TimeGrid g({0.0, 0.5, 1.25, 3.0});
  CHECK(g.knot_count() == 4);
  CHECK(g.basis_count() == 6);
  CHECK(g.start() == 0.0);
  CHECK(g.end() == 3.0);
}

TEST_CASE("TimeGrid::uniform covers the requested span") {
  const TimeGrid g = TimeGrid::uniform(0.5, 10.0);
  CHECK(g.knot_count() == 21);
  CHECK(g.end() == doctest::Approx(10.0));

  const TimeGrid g2 = TimeGrid::uniform(0.5, 10.2);
  CHECK(g2.knot_count() == 22);
  CHECK(g2.end() >= 10.2);

  const TimeGrid g3 = TimeGrid::uniform(0.5, 0.0);
  CHECK(g3.knot_count() == 2);

  // 0.3 / 0.1 is 2.9999... in floating point; no spurious extra knot.
  const TimeGrid g4 = TimeGrid::uniform(0.1, 0.3);
  CHECK(g4.knot_count() == 4);
  CHECK(g4.end() >= 0.3);

  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(TimeGrid::uniform(-0.5, 1.0), ArgumentError);
}

TEST_CASE("constant and ramp modes") {
  const TimeGrid g = TimeGrid::uniform(1.0, 5.0);
  CHECK(eval_basis(g, 0, 7.3, Deriv::position) == 1.0);
  CHECK(eval_basis(g, 0, 7.3, Deriv::velocity) == 0.0);
  CHECK(eval_basis(g, 0, 7.3, Deriv::acceleration) == 0.0);

  CHECK(eval_basis(g, 1, 2.5, Deriv::velocity) == 1.0);
  CHECK(eval_basis(g, 1, 2.5, Deriv::position) == doctest::Approx(2.5));
  CHECK(eval_basis(g, 1, 2.5, Deriv::acceleration) == 0.0);
}

TEST_CASE("hat second derivative peaks at its knot and vanishes at neighbors") {
  const TimeGrid g = TimeGrid::uniform(1.0, 5.0);
  const std::size_t j = 2 + 3;  // hat centered at knot 3
  CHECK(eval_basis(g, j, 3.0, Deriv::acceleration) == 1.0);
  CHECK(eval_basis(g, j, 2.0, Deriv::acceleration) == 0.0);
  CHECK(eval_basis(g, j, 4.0, Deriv::acceleration) == 0.0);
  CHECK(eval_basis(g, j, 3.5, Deriv::acceleration) == doctest::Approx(0.5));
}

TEST_CASE("velocity and position match quadrature of the derivative") {
  const TimeGrid g({0.0, 0.5, 1.25, 3.0, 4.0});
  for (const std::size_t j : {std::size_t{2}, std::size_t{4},
                              std::size_t{5}, std::size_t{6}}) {
    for (const double t : {0.7, 1.5, 3.5, 4.7}) {
      const double vel_ref = oracles::trapezoid(
          [&](double u) { return eval_basis(g, j, u, Deriv::acceleration); },
          0.0, t, 500000);
      const double pos_ref = oracles::trapezoid(
          [&](double u) { return eval_basis(g, j, u, Deriv::velocity); }, 0.0,
          t, 500000);
      CHECK(std::abs(eval_basis(g, j, t, Deriv::velocity) - vel_ref) < 1e-10);
      CHECK(std::abs(eval_basis(g, j, t, Deriv::position) - pos_ref) < 1e-10);
    }
  }
}

TEST_CASE("causality and linear tail") {
  const TimeGrid g = TimeGrid::uniform(1.0, 6.0);
  const std::size_t j = 2 + 3;  // hat centered at knot 3, support (2, 4)
  for (const double t : {0.0, 0.5, 1.9, 2.0}) {
    CHECK(eval_basis(g, j, t, Deriv::position) == 0.0);
    CHECK(eval_basis(g, j, t, Deriv::velocity) == 0.0);
    CHECK(eval_basis(g, j, t, Deriv::acceleration) == 0.0);
  }
  // Past the right neighbor: no acceleration, constant velocity, affine
  // position.
  CHECK(eval_basis(g, j, 4.5, Deriv::acceleration) == 0.0);
  CHECK(eval_basis(g, j, 4.5, Deriv::velocity) ==
        doctest::Approx(eval_basis(g, j, 5.5, Deriv::velocity)));
  const double p1 = eval_basis(g, j, 4.5, Deriv::position);
  const double p2 = eval_basis(g, j, 5.0, Deriv::position);
  const double p3 = eval_basis(g, j, 5.5, Deriv::position);
  CHECK(std::abs(p1 - 2.0 * p2 + p3) < 1e-12);
}

TEST_CASE("boundary hats keep their inner halves") {
  const TimeGrid g = TimeGrid::uniform(1.0, 4.0);
  // First hat starts at value 1 and only falls.
  CHECK(eval_basis(g, 2, 0.0, Deriv::acceleration) == 1.0);
  CHECK(eval_basis(g, 2, 0.5, Deriv::acceleration) == doctest::Approx(0.5));
  CHECK(eval_basis(g, 2, 1.0, Deriv::acceleration) == 0.0);
  CHECK(eval_basis(g, 2, 0.0, Deriv::position) == 0.0);
  CHECK(eval_basis(g, 2, 0.0, Deriv::velocity) == 0.0);

  // Last hat rises and then holds acceleration 1 past the grid end.
  const std::size_t last = g.basis_count() - 1;
  CHECK(eval_basis(g, last, 4.0, Deriv::acceleration) == 1.0);
  CHECK(eval_basis(g, last, 3.0, Deriv::acceleration) == 0.0);
  CHECK(eval_basis(g, last, 9.0, Deriv::acceleration) == 1.0);
}

TEST_CASE("partition of unity over the hats") {
  const TimeGrid uniform = TimeGrid::uniform(0.5, 4.0);
  const TimeGrid uneven({0.0, 0.5, 1.25, 3.0, 4.0});
  for (const TimeGrid& g : {uniform, uneven}) {
    for (int i = 1; i <= 80; ++i) {
      const double t = g.end() * static_cast<double>(i) / 80.0;
      double sum = 0.0;
      for (std::size_t j = 2; j < g.basis_count(); ++j) {
        sum += eval_basis(g, j, t, Deriv::acceleration);
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    // The constant-acceleration tail keeps the sum at 1 past the end.
    double sum = 0.0;
    for (std::size_t j = 2; j < g.basis_count(); ++j) {
      sum += eval_basis(g, j, g.end() + 2.5, Deriv::acceleration);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("derivative consistency by central differences") {
  const TimeGrid g({0.0, 0.5, 1.25, 3.0, 4.0});
  const double h = 1e-4;
  // Offsets chosen away from every knot so no difference straddles a kink.
  for (const double t : {0.2, 0.7, 1.0, 1.7, 2.2, 3.3, 3.8, 4.4}) {
    for (std::size_t j = 0; j < g.basis_count(); ++j) {
      const double dpos = (eval_basis(g, j, t + h, Deriv::position) -
                           eval_basis(g, j, t - h, Deriv::position)) /
                          (2.0 * h);
      const double vel = eval_basis(g, j, t, Deriv::velocity);
      CHECK(std::abs(dpos - vel) <= 1e-5 * std::max(1.0, std::abs(vel)));

      const double dvel = (eval_basis(g, j, t + h, Deriv::velocity) -
                           eval_basis(g, j, t - h, Deriv::velocity)) /
                          (2.0 * h);
      const double acc = eval_basis(g, j, t, Deriv::acceleration);
      CHECK(std::abs(dvel - acc) <= 1e-5 * std::max(1.0, std::abs(acc)));
    }
  }
}

TEST_CASE("continuity across knots") {
  const TimeGrid g({0.0, 0.5, 1.25, 3.0, 4.0});
  for (std::size_t k = 1; k < g.knot_count(); ++k) {
    const double t = g.knot(k);
    const double before = std::nextafter(t, -1.0);
    for (std::size_t j = 0; j < g.basis_count(); ++j) {
      CHECK(std::abs(eval_basis(g, j, t, Deriv::position) -
                     eval_basis(g, j, before, Deriv::position)) < 1e-12);
      CHECK(std::abs(eval_basis(g, j, t, Deriv::velocity) -
                     eval_basis(g, j, before, Deriv::velocity)) < 1e-12);
      CHECK(std::abs(eval_basis(g, j, t, Deriv::acceleration) -
                     eval_basis(g, j, before, Deriv::acceleration)) < 1e-12);
    }
  }
}

TEST_CASE("design_matrix matches per-entry evaluation") {
  const TimeGrid g = TimeGrid::uniform(1.0, 2.0);

  const std::vector<double> t0{0.0};
  const Eigen::MatrixXd row = design_matrix(g, t0, Deriv::position);
  CHECK(row.rows() == 1);
  CHECK(row.cols() == 5);
  CHECK(row(0, 0) == 1.0);
  for (Eigen::Index j = 1; j < 5; ++j) CHECK(row(0, j) == 0.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(0.0, 2.0);
  std::vector<double> times(50);
  for (double& t : times) t = pick(rng);

  for (const Deriv order :
       {Deriv::position, Deriv::velocity, Deriv::acceleration}) {
    const Eigen::MatrixXd f = design_matrix(g, times, order);
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (std::size_t j = 0; j < g.basis_count(); ++j) {
        CHECK(f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              eval_basis(g, j, times[i], order));
      }
    }
  }
}

TEST_CASE("invalid index or order raises") {
  const TimeGrid g = TimeGrid::uniform(1.0, 2.0);
  CHECK_THROWS_AS(eval_basis(g, g.basis_count(), 1.0, Deriv::position),
                  ArgumentError);
  CHECK_THROWS_AS(eval_basis(g, 0, 1.0, static_cast<Deriv>(5)),
                  ArgumentError);
}
