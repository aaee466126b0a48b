#pragma once

#include "casimir/materials.hpp"

#include <span>

namespace casimir {

/// Square root with Im >= 0; a real negative radicand maps to +i sqrt(|z|).
complex branch_sqrt(complex z);

struct WaveKinematics {
  complex omega;
  double k_perp = 0.0;
  complex k0;  // omega / c
  complex k_z; // sqrt(k0^2 - k_perp^2), vacuum side
  complex s;   // sqrt(eps k0^2 - k_perp^2), inside the medium
};

WaveKinematics kinematics(complex omega, double k_perp, complex eps);

struct ReflectionSet {
  complex r_te;
  complex r_tm;
  complex r_bar; // (eps - 1) / (eps + 1), the quasi-static coefficient

  bool operator==(const ReflectionSet&) const = default;
};

/// Fresnel coefficients at a non-zero frequency on the real or positive
/// imaginary axis. On the imaginary axis all three are exactly real.
ReflectionSet reflection(const MaterialModel& model, complex omega, double k_perp);

/// Real-valued coefficients at omega = i xi, xi > 0.
struct RealReflection {
  double r_te;
  double r_tm;
  double r_bar;
};
RealReflection reflection_imaginary(const MaterialModel& model, double xi, double k_perp);

/// Exact omega -> 0 limits, per zero-frequency class. k_perp > 0.
RealReflection reflection_static(const MaterialModel& model, double k_perp);

/// Fitted exponent of |r_tm(omega, k) - r_bar(omega)| against omega over a
/// strictly decreasing sweep of real frequencies.
double tm_scalar_gap(const MaterialModel& model, double k_perp,
                     std::span<const double> omega_sweep);

} // namespace casimir
