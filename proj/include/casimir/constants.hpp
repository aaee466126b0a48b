#pragma once

#include <numbers>

namespace casimir {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
inline constexpr double kSpeedOfLight = 2.99792458e8; // m / s

inline constexpr double kPi = std::numbers::pi;

// Apery's constant zeta(3).
inline constexpr double kZeta3 = 1.2020569031595942853997381615114;

/// First Matsubara frequency xi_1 = 2 pi k_B T / hbar in rad/s.
constexpr double first_matsubara_frequency(double temperature) {
  return 2.0 * kPi * kBoltzmann * temperature / kHbar;
}

} // namespace casimir
