#pragma once

#include "casimir/materials.hpp"

#include <array>
#include <span>
#include <string>

namespace casimir {

using Tensor3 = std::array<std::array<double, 3>, 3>;

/// Two points on the same surface normal outside the slab occupying z < 0.
struct SlabPoint {
  double z;
  double z_prime;
};

/// Classical-limit magnetic correlator B^cl_perp (k_B T factored out), in 1/m^3,
/// for coincident transverse coordinates. Only the TE zero-frequency
/// reflection coefficient enters. Throws Error{SurfaceContact} when
/// z + z' < min_separation.
Tensor3 b_correlator_classical(const MaterialModel& model, SlabPoint point,
                               double min_separation = 1e-11);

/// Minimum of the fitted small-omega exponents of |k0^2 r_te(omega, k)| and
/// |r_tm(omega, k) - r_bar(omega)|. A piece that vanishes identically counts
/// as +infinity. Needs >= 5 strictly decreasing frequencies. Tabulated models
/// are probed along the imaginary axis, where their data live.
double e_correlator_limit_exponent(const MaterialModel& model, double k_perp,
                                   std::span<const double> omega_sweep);

enum class Verdict { Pass, Fail };

struct BvLReport {
  ZeroFreqClass model_class = ZeroFreqClass::Finite;
  double b_correlator_norm = 0.0;   // |B^cl|_F / |B^cl(ideal)|_F at the probe point
  double e_limit_exponent = 0.0;
  double cavity_classical_te = 0.0; // Pa, symmetric cavity of the model
  double reference_scale = 0.0;     // Pa, same quantity for ideal metals
  Verdict verdict = Verdict::Fail;

  Tensor3 b_tensor{};               // 1/m^3
  Tensor3 b_reference_tensor{};     // 1/m^3

  bool operator==(const BvLReport&) const = default;
};

inline constexpr double kBvLThreshold = 1e-10;

/// Bohr-van Leeuwen check of a material model: the transverse fields must
/// decouple from matter in the classical limit.
BvLReport bvl_verdict(const MaterialModel& model, double d, double temperature, double z_probe,
                      double threshold = kBvLThreshold);

/// Three-decade sweep below c k_perp used by bvl_verdict.
std::array<double, 7> classical_limit_sweep(double k_perp);

std::string to_string(Verdict verdict);
Verdict parse_verdict(const std::string& name);

} // namespace casimir
