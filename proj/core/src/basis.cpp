#include "physpline/basis.hpp"

#include <cmath>
#include <string>

#include "physpline/errors.hpp"

namespace physpline {
namespace {

// Twice-integrated hat centered at knot `center` with left/right neighbor
// spacings L and R. L == 0 marks the truncated first hat; has_right == false
// marks the truncated last hat (constant acceleration 1 beyond its center).
struct Hat {
  double center;
  double left_len;
  double right_len;
  bool has_right;
};

Hat hat_geometry(const TimeGrid& grid, std::size_t center_idx) {
  const std::size_t last = grid.knot_count() - 1;
  Hat h;
  h.center = grid.knot(center_idx);
  h.left_len = center_idx > 0 ? h.center - grid.knot(center_idx - 1) : 0.0;
  h.has_right = center_idx < last;
  h.right_len = h.has_right ? grid.knot(center_idx + 1) - h.center : 0.0;
  return h;
}

double eval_hat(const Hat& h, double t, Deriv order) {
  const double L = h.left_len;

  // Left of the support: identically zero at all orders.
  if (L > 0.0 ? (t <= h.center - L) : (t < h.center)) return 0.0;

  // Rising half over (center - L, center]. Absent for the first hat (L == 0).
  if (L > 0.0 && t <= h.center) {
    const double u = t - (h.center - L);
    switch (order) {
      case Deriv::acceleration: return u / L;
      case Deriv::velocity: return 0.5 * u * u / L;
      case Deriv::position: return u * u * u / (6.0 * L);
    }
  }

  const double s = t - h.center;

  if (h.has_right) {
    const double R = h.right_len;
    // Falling half over (center, center + R]; also covers t == center for the
    // first hat, where the formulas reduce to the peak values (1, 0, 0).
    if (t <= h.center + R) {
      switch (order) {
        case Deriv::acceleration: return 1.0 - s / R;
        case Deriv::velocity: return -0.5 * s * s / R + s + 0.5 * L;
        case Deriv::position:
          return -s * s * s / (6.0 * R) + 0.5 * s * s + 0.5 * L * s +
                 L * L / 6.0;
      }
    }
    // Past the support the acceleration is zero, the velocity contribution is
    // the accumulated constant and the position contribution grows linearly.
    switch (order) {
      case Deriv::acceleration: return 0.0;
      case Deriv::velocity: return 0.5 * (L + R);
      case Deriv::position:
        return 0.5 * (L + R) * (t - h.center - R) + R * R / 3.0 + L * L / 6.0 +
               0.5 * L * R;
    }
  }

  // Last hat beyond its center: acceleration stays at 1.
  switch (order) {
    case Deriv::acceleration: return 1.0;
    case Deriv::velocity: return 0.5 * L + s;
    case Deriv::position: return L * L / 6.0 + 0.5 * L * s + 0.5 * s * s;
  }
  return 0.0;  // unreachable
}

void check_order(Deriv order) {
  switch (order) {
    case Deriv::position:
    case Deriv::velocity:
    case Deriv::acceleration: return;
  }
  throw ArgumentError("invalid derivative order " +
                      std::to_string(static_cast<int>(order)));
}

}  // namespace

double eval_basis(const TimeGrid& grid, std::size_t j, double t, Deriv order) {
  check_order(order);
  if (j >= grid.basis_count()) {
    throw ArgumentError("basis index " + std::to_string(j) +
                        " out of range for " +
                        std::to_string(grid.basis_count()) + " basis functions");
  }
  if (j == 0) {
    return order == Deriv::position ? 1.0 : 0.0;
  }
  if (j == 1) {
    switch (order) {
      case Deriv::position: return t - grid.start();
      case Deriv::velocity: return 1.0;
      case Deriv::acceleration: return 0.0;
    }
  }
  return eval_hat(hat_geometry(grid, j - 2), t, order);
}

Eigen::RowVectorXd basis_row(const TimeGrid& grid, double t, Deriv order) {
  check_order(order);
  const auto n = static_cast<Eigen::Index>(grid.basis_count());
  Eigen::RowVectorXd row(n);
  row(0) = order == Deriv::position ? 1.0 : 0.0;
  switch (order) {
    case Deriv::position: row(1) = t - grid.start(); break;
    case Deriv::velocity: row(1) = 1.0; break;
    case Deriv::acceleration: row(1) = 0.0; break;
  }
  for (Eigen::Index j = 2; j < n; ++j) {
    row(j) = eval_hat(hat_geometry(grid, static_cast<std::size_t>(j - 2)), t,
                      order);
  }
  return row;
}

Eigen::MatrixXd design_matrix(const TimeGrid& grid,
                              std::span<const double> times, Deriv order) {
  check_order(order);
  const auto rows = static_cast<Eigen::Index>(times.size());
  const auto cols = static_cast<Eigen::Index>(grid.basis_count());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    m.row(i) = basis_row(grid, times[static_cast<std::size_t>(i)], order);
  }
  return m;
}

}  // namespace physpline
