#pragma once

#include "physpline/costs.hpp"
#include "physpline/model.hpp"

namespace physpline {

/// Solves Q w = b by a dense Cholesky factorization and splits the stacked
/// solution into its two axis blocks. The residual is checked against
/// ||Q w - b||_inf / max(1, ||b||_inf) <= 1e-8; a failed factorization or a
/// failed check raises SingularSystemError rather than returning a garbage
/// vector (typical cures: add regularization or position measurements).
WeightVector solve(const NormalEquations& ne);

/// Independent reference solver for tests: minimum-norm minimizer of the
/// quadratic via an eigendecomposition pseudo-inverse. Restricted to small
/// systems (dimension <= 60); no singularity error, by construction.
WeightVector oracle_solve(const NormalEquations& ne);

}  // namespace physpline
