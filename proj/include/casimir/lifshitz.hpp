#pragma once

#include "casimir/constants.hpp"
#include "casimir/materials.hpp"

#include <vector>

namespace casimir {

/// Two half-spaces (z <= 0 and z >= d) separated by a vacuum gap.
struct CavityConfig {
  MaterialModel material_1 = MaterialModel::ideal_metal();
  MaterialModel material_2 = MaterialModel::ideal_metal();
  double d = 1e-6;          // m
  double T = 300.0;         // K
  double rel_tol = 1e-9;    // Matsubara sum
  double k_rel_tol = 1e-8;  // k_perp integrals
};

/// Throws Error{InvalidArgument} outside d in [1e-9, 1e-3] m, T in (0, 1e4] K.
void validate(const CavityConfig& config);

enum class Polarization { TE, TM };

/// Unweighted contribution of Matsubara index n, in Pa. The pressure weights
/// n = 0 by one half.
struct MatsubaraTerm {
  long n = 0;
  double te = 0.0;
  double tm = 0.0;
};

struct PressureResult {
  double pressure = 0.0;       // Pa, negative = attractive
  double error_estimate = 0.0; // Pa
  double n0_te = 0.0;          // half-weighted n = 0 TE term, Pa
  double n0_tm = 0.0;          // half-weighted n = 0 TM term, Pa
  std::vector<MatsubaraTerm> per_n;
  long n_max = 0;
  // Real-frequency evaluation only: split of the k_perp integral at the light line.
  double evanescent = 0.0;
  double propagating = 0.0;
};

PressureResult pressure_matsubara(const CavityConfig& config);

/// Half-weighted n = 0 term for one polarization, from the static reflection
/// coefficients.
double n0_term(const CavityConfig& config, Polarization polarization);

/// Classical (hbar -> 0) transverse stress, -k_B T lim_{omega->0} T_perp(omega).
/// Only TE modes survive the limit, so this is exactly the n = 0 TE term.
double classical_transverse_pressure(const CavityConfig& config);

struct RealFrequencyConfig {
  double hbar = kHbar;
  double omega_cap = 0.0;   // rad/s; 0 selects 50 c / (2 d)
  double rel_tol = 5e-2;    // frequency integral
  double k_rel_tol = 1e-9;  // inner k_perp integrals
};

/// Lifshitz pressure as an integral over real frequencies. Diagnostic grade;
/// needs lossy (or constant-permittivity) materials with a real-axis response.
PressureResult pressure_real_frequency(const CavityConfig& config,
                                       const RealFrequencyConfig& rf = {});

/// Pieces of the (omega, k_perp) integrand of <T_zz>, including the
/// E_beta(omega)/omega weight, in Pa per (rad/s)(1/m).
struct StressSplit {
  double longitudinal = 0.0;
  double transverse_scalar = 0.0;
  double transverse_propagating_te = 0.0;
  double transverse_propagating_tm = 0.0;
};

StressSplit stress_split_integrands(const CavityConfig& config, double omega, double k_perp,
                                    double hbar = kHbar);

/// E_beta(omega) = (hbar omega / 2) coth(hbar omega / (2 k_B T)), in J.
double thermal_energy(double omega, double temperature, double hbar = kHbar);

} // namespace casimir
