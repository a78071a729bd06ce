#include "physpline/config.hpp"

#include <cmath>
#include <string>

#include "physpline/errors.hpp"

namespace physpline {

namespace {

void require_weight(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ArgumentError(std::string(name) + " must be finite and >= 0, got " +
                        std::to_string(value));
  }
}

}  // namespace

void FitConfig::validate() const {
  if (!std::isfinite(grid_dt) || grid_dt <= 0.0) {
    throw ArgumentError("grid_dt must be finite and > 0, got " +
                        std::to_string(grid_dt));
  }
  require_weight(c_pos, "c_pos");
  require_weight(c_vel, "c_vel");
  require_weight(c_acc, "c_acc");
  require_weight(c_lon, "c_lon");
  require_weight(c_lat, "c_lat");
  require_weight(c_heading_dir, "c_heading_dir");
  require_weight(lambda_acc_reg, "lambda_acc_reg");
  require_weight(c_zero_vel, "c_zero_vel");
  if (!std::isfinite(v_stop) || v_stop <= 0.0) {
    throw ArgumentError("v_stop must be finite and > 0");
  }
  if (!std::isfinite(t_stop) || t_stop <= 0.0) {
    throw ArgumentError("t_stop must be finite and > 0");
  }
}

}  // namespace physpline
