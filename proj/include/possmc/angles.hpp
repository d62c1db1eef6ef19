#pragma once

#include <cmath>
#include <numbers>

#include "possmc/types.hpp"

namespace possmc {

// Maps an angle onto (-pi, pi].
inline double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("wrap_angle: non-finite angle");
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

// Same mapping without the finiteness check, for inner loops.
inline double wrap_angle_unchecked(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

}  // namespace possmc
