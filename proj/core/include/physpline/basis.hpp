#pragma once

#include <Eigen/Core>
#include <span>

#include "physpline/grid.hpp"

namespace physpline {

/// Derivative order of a basis evaluation.
enum class Deriv { position = 0, velocity = 1, acceleration = 2 };

/// Evaluates basis function j (or one of its first two derivatives) at time t.
///
/// The basis is built so that the model's acceleration is piecewise linear and
/// velocity/position are its exact integrals:
///   j = 0    constant mode, f = 1            (initial position weight)
///   j = 1    ramp mode,     f = t            (initial velocity weight)
///   j >= 2   twice-integrated hat centered at knot j - 2; its second
///            derivative is the triangular hat that is 1 at the center knot
///            and 0 at the neighbor knots.
///
/// The hat at the first knot keeps only its falling half (it starts at value 1
/// at t = 0); the hat at the last knot keeps only its rising half and holds
/// value 1 beyond the last knot, so evaluating past the grid extrapolates at
/// constant acceleration equal to the last weight. All integration constants
/// are chosen so f and its first derivative are continuous everywhere and
/// vanish at t = 0 for every hat.
double eval_basis(const TimeGrid& grid, std::size_t j, double t, Deriv order);

/// One basis row: [f_0(t), ..., f_{K+1}(t)] at the given derivative order.
Eigen::RowVectorXd basis_row(const TimeGrid& grid, double t, Deriv order);

/// Design matrix over a time vector: entry (i, j) = eval_basis(grid, j,
/// times[i], order). Rows are timestamps, columns basis indices.
Eigen::MatrixXd design_matrix(const TimeGrid& grid,
                              std::span<const double> times, Deriv order);

}  // namespace physpline
