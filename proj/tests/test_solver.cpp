#include <Eigen/LU>
#include <cmath>
#include <doctest.h>
#include <random>
#include <vector>

#include "physpline/costs.hpp"
#include "physpline/errors.hpp"
#include "physpline/model.hpp"
#include "physpline/solver.hpp"
#include "random_system.hpp"

using namespace physpline;
using testsupport::random_system;

namespace {

double quadratic_cost(const NormalEquations& ne, const Eigen::VectorXd& w) {
  return w.dot(ne.Q * w) - 2.0 * w.dot(ne.b);
}

Eigen::VectorXd stack(const WeightVector& w) {
  Eigen::VectorXd out(w.x_block.size() + w.y_block.size());
  out << w.x_block, w.y_block;
  return out;
}

}  // namespace

TEST_CASE("identity system returns b") {
  NormalEquations ne(8);
  ne.Q = Eigen::MatrixXd::Identity(8, 8);
  ne.b << 1, 2, 3, 4, 5, 6, 7, 8;
  const WeightVector w = solve(ne);
  CHECK(w.x_block.size() == 4);
  CHECK(w.y_block.size() == 4);
  CHECK((w.x_block - Eigen::Vector4d(1, 2, 3, 4)).norm() == 0.0);
  CHECK((w.y_block - Eigen::Vector4d(5, 6, 7, 8)).norm() == 0.0);
}

TEST_CASE("odd dimension is rejected") {
  NormalEquations ne(7);
  ne.Q = Eigen::MatrixXd::Identity(7, 7);
  CHECK_THROWS_AS(solve(ne), ArgumentError);
  CHECK_THROWS_AS(oracle_solve(ne), ArgumentError);
}

TEST_CASE("small SPD system matches the eigendecomposition oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> val(0.0, 1.0);
  Eigen::MatrixXd a(8, 8);
  for (Eigen::Index i = 0; i < 64; ++i) a(i / 8, i % 8) = val(rng);
  NormalEquations ne(8);
  ne.Q = a.transpose() * a + 0.1 * Eigen::MatrixXd::Identity(8, 8);
  for (Eigen::Index i = 0; i < 8; ++i) ne.b[i] = val(rng);

  const Eigen::VectorXd w = stack(solve(ne));
  const Eigen::VectorXd ref = stack(oracle_solve(ne));
  CHECK((w - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("constant-acceleration track is recovered") {
  std::vector<Measurement> meas;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    meas.push_back(Measurement::position(t, 1.0 + 2.0 * t + 1.5 * t * t,
                                         -1.0 + 0.5 * t * t));
  }
  FitConfig cfg;
  cfg.grid_dt = 0.5;
  cfg.lambda_acc_reg = 0.0;
  const MeasurementSet set{meas};
  const WeightVector w = solve(assemble(set, cfg));

  CHECK(std::abs(w.x_block[0] - 1.0) < 1e-8);
  CHECK(std::abs(w.x_block[1] - 2.0) < 1e-8);
  CHECK(std::abs(w.y_block[0] + 1.0) < 1e-8);
  CHECK(std::abs(w.y_block[1] - 0.0) < 1e-8);
  for (Eigen::Index j = 2; j < w.x_block.size(); ++j) {
    CHECK(std::abs(w.x_block[j] - 3.0) < 1e-7);
    CHECK(std::abs(w.y_block[j] - 1.0) < 1e-7);
  }
}

TEST_CASE("rank-deficient system: solve refuses, oracle gives minimum norm") {
  // One position measurement on a 2-knot grid pins 2 of 8 directions.
  const TimeGrid g({0.0, 1.0});
  NormalEquations ne(2 * g.basis_count());
  const std::vector<Measurement> m = {Measurement::position(0.5, 1.0, 2.0)};
  add_position_cost(ne, g, m, 1.0);
  ne.symmetrize();

  CHECK_THROWS_AS(solve(ne), SingularSystemError);

  const Eigen::VectorXd w = stack(oracle_solve(ne));
  CHECK((ne.Q * w - ne.b).cwiseAbs().maxCoeff() < 1e-12);
  // The minimum-norm solution is orthogonal to the null space of Q.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ne.Q);
  const Eigen::MatrixXd null_space = lu.kernel();
  REQUIRE(null_space.cols() == 6);
  CHECK((null_space.transpose() * w).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random assembled systems match the oracle") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const NormalEquations ne = random_system(seed);
    const Eigen::VectorXd w = stack(solve(ne));
    const Eigen::VectorXd ref = stack(oracle_solve(ne));
    CHECK((w - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("solution is a local minimum of the quadratic cost") {
  const NormalEquations ne = random_system(77);
  const Eigen::VectorXd w = stack(solve(ne));
  const double at_solution = quadratic_cost(ne, w);

  std::mt19937_64 rng(78);
  std::normal_distribution<double> val(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta(w.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i) delta[i] = val(rng);
    delta *= 1e-3 / delta.norm();
    CHECK(quadratic_cost(ne, w + delta) >= at_solution - 1e-12);
  }
}

TEST_CASE("gradient vanishes at the solution") {
  const NormalEquations ne = random_system(123);
  const Eigen::VectorXd w = stack(solve(ne));
  const Eigen::VectorXd grad = 2.0 * (ne.Q * w - ne.b);
  CHECK(grad.cwiseAbs().maxCoeff() <
        1e-8 * std::max(1.0, ne.b.cwiseAbs().maxCoeff()));
}

TEST_CASE("oracle_solve rejects large systems") {
  NormalEquations ne(62);
  ne.Q = Eigen::MatrixXd::Identity(62, 62);
  CHECK_THROWS_AS(oracle_solve(ne), ArgumentError);
}
