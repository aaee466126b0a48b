#include "casimir/fresnel.hpp"

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

#include <cmath>
#include <vector>

namespace casimir {

complex branch_sqrt(complex z) {
  if (z.imag() == 0.0) {
    if (z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return {std::sqrt(z.real()), 0.0};
  }
  complex root = std::sqrt(z);
  if (root.imag() < 0.0) root = -root;
  return root;
}

WaveKinematics kinematics(complex omega, double k_perp, complex eps) {
  WaveKinematics kin;
  kin.omega = omega;
  kin.k_perp = k_perp;
  kin.k0 = omega / kSpeedOfLight;
  const complex k0_sq = kin.k0 * kin.k0;
  const double kp_sq = k_perp * k_perp;
  kin.k_z = branch_sqrt(k0_sq - kp_sq);
  kin.s = branch_sqrt(eps * k0_sq - kp_sq);
  return kin;
}

RealReflection reflection_imaginary(const MaterialModel& model, double xi, double k_perp) {
  if (!(xi > 0.0)) {
    throw Error(ErrorKind::ZeroFrequency, "use reflection_static for the zero-frequency limit");
  }
  if (model.kind() == MaterialKind::IdealMetal) return {-1.0, 1.0, 1.0};
  const double eps = eval_epsilon_imaginary(model, xi);
  const double xi_c = xi / kSpeedOfLight;
  const double q = std::sqrt(k_perp * k_perp + xi_c * xi_c);
  const double s = std::sqrt(k_perp * k_perp + eps * xi_c * xi_c);
  return {(q - s) / (q + s), (eps * q - s) / (eps * q + s), (eps - 1.0) / (eps + 1.0)};
}

ReflectionSet reflection(const MaterialModel& model, complex omega, double k_perp) {
  if (omega == 0.0) {
    throw Error(ErrorKind::ZeroFrequency, "use reflection_static for the zero-frequency limit");
  }
  if (model.kind() == MaterialKind::IdealMetal) return {-1.0, 1.0, 1.0};
  if (omega.real() == 0.0 && omega.imag() > 0.0) {
    const auto r = reflection_imaginary(model, omega.imag(), k_perp);
    return {r.r_te, r.r_tm, r.r_bar};
  }
  const complex eps = eval_epsilon(model, omega);
  const auto kin = kinematics(omega, k_perp, eps);
  return {(kin.k_z - kin.s) / (kin.k_z + kin.s), (eps * kin.k_z - kin.s) / (eps * kin.k_z + kin.s),
          (eps - 1.0) / (eps + 1.0)};
}

RealReflection reflection_static(const MaterialModel& model, double k_perp) {
  if (!(k_perp > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "static reflection needs k_perp > 0");
  }
  switch (zero_freq_class(model)) {
  case ZeroFreqClass::Finite: {
    // s(0) = i k_perp = k_z(0), so r_tm(0) collapses onto r_bar(0).
    const double eps = static_permittivity(model);
    const double r = (eps - 1.0) / (eps + 1.0);
    return {0.0, r, r};
  }
  case ZeroFreqClass::InverseOmega:
    return {0.0, 1.0, 1.0};
  case ZeroFreqClass::InverseOmegaSquared: {
    const double kp_c_sq = static_plasma_frequency_squared(model) /
                           (kSpeedOfLight * kSpeedOfLight);
    const double root = std::sqrt(k_perp * k_perp + kp_c_sq);
    return {(k_perp - root) / (k_perp + root), 1.0, 1.0};
  }
  case ZeroFreqClass::Ideal:
    return {-1.0, 1.0, 1.0};
  }
  return {0.0, 0.0, 0.0};
}

double tm_scalar_gap(const MaterialModel& model, double k_perp,
                     std::span<const double> omega_sweep) {
  if (model.kind() == MaterialKind::IdealMetal) {
    throw Error(ErrorKind::IdealMetalHasNoEpsilon,
                "r_tm - r_bar vanishes identically for the ideal metal");
  }
  if (omega_sweep.size() < 3) {
    throw Error(ErrorKind::DegenerateSweep, "frequency sweep needs at least three points");
  }
  std::vector<Sample> samples;
  samples.reserve(omega_sweep.size());
  for (double w : omega_sweep) {
    if (!(w > 0.0)) throw Error(ErrorKind::DegenerateSweep, "sweep frequencies must be positive");
    const auto r = reflection(model, w, k_perp);
    samples.push_back({w, std::abs(r.r_tm - r.r_bar)});
  }
  return fit_power_law(samples).exponent;
}

} // namespace casimir
