#pragma once

#include <numbers>

namespace cosmoshock {

// Geometric units c = G = 1 throughout; kappa = 8*pi is the Einstein
// coupling constant and H0 sets the single physical scale.
inline constexpr double kappa = 8.0 * std::numbers::pi;
inline constexpr double speed_of_light = 1.0;
inline constexpr double newton_G = 1.0;

}  // namespace cosmoshock
