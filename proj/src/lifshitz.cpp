#include "casimir/lifshitz.hpp"

#include "casimir/error.hpp"
#include "casimir/fresnel.hpp"
#include "casimir/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>

namespace casimir {
namespace {

constexpr double kC = kSpeedOfLight;

// Round-trip factor A / (1 - A) with A = product * exp(-x), x >= 0.
double round_trip(double product, double x) {
  if (product == 0.0) return 0.0;
  const double a = product * std::exp(-x);
  const double denom = (1.0 - product) - product * std::expm1(-x);
  return a / denom;
}

// exp(z) - 1 without cancellation for small |z|.
complex expm1(complex z) {
  const double phase = z.imag();
  const double em1 = std::expm1(z.real());
  const double s = std::sin(0.5 * phase);
  const complex rot_m1(-2.0 * s * s, std::sin(phase));
  return em1 * std::exp(complex(0.0, phase)) + rot_m1;
}

// A / (1 - A) with A = product * exp(2 i k_z d), Im k_z >= 0.
complex round_trip(complex product, complex kz, double d) {
  if (product == 0.0) return 0.0;
  const complex phase = complex(0.0, 2.0 * d) * kz;
  const complex a = product * std::exp(phase);
  const complex denom = (1.0 - product) - product * expm1(phase);
  return a / denom;
}

struct PairReflection {
  double te;
  double tm;
};

PairReflection matsubara_products(const CavityConfig& config, long n, double xi, double k) {
  if (n == 0) {
    const auto r1 = reflection_static(config.material_1, k);
    const auto r2 = reflection_static(config.material_2, k);
    return {r1.r_te * r2.r_te, r1.r_tm * r2.r_tm};
  }
  const auto r1 = reflection_imaginary(config.material_1, xi, k);
  const auto r2 = reflection_imaginary(config.material_2, xi, k);
  return {r1.r_te * r2.r_te, r1.r_tm * r2.r_tm};
}

bool static_te_vanishes(const MaterialModel& m) {
  const auto cls = zero_freq_class(m);
  return cls == ZeroFreqClass::Finite || cls == ZeroFreqClass::InverseOmega;
}

struct TermIntegral {
  double te = 0.0;
  double tm = 0.0;
  double error = 0.0; // integral units
};

// Integral over k of k q A/(1-A) for both polarizations at Matsubara index n.
TermIntegral matsubara_integrals(const CavityConfig& config, long n, double xi) {
  TermIntegral out;
  const double d = config.d;
  const double xi_c = xi / kC;
  const double scale = 1.0 / (2.0 * d);
  for (auto pol : {Polarization::TE, Polarization::TM}) {
    if (n == 0 && pol == Polarization::TE &&
        (static_te_vanishes(config.material_1) || static_te_vanishes(config.material_2))) {
      continue;
    }
    const RealFunction f = [&](double k) {
      if (k == 0.0) return 0.0;
      const double q = std::sqrt(k * k + xi_c * xi_c);
      const auto prod = matsubara_products(config, n, xi, k);
      const double r = pol == Polarization::TE ? prod.te : prod.tm;
      return k * q * round_trip(r, 2.0 * q * d);
    };
    const auto res = integrate_semi_infinite(f, scale, config.k_rel_tol);
    (pol == Polarization::TE ? out.te : out.tm) = res.value;
    out.error += res.error_estimate;
  }
  return out;
}

void require_real_axis(const MaterialModel& m) {
  switch (m.kind()) {
  case MaterialKind::Tabulated:
    throw Error(ErrorKind::TabulatedOutOfRange,
                "tabulated models carry no real-axis data");
  case MaterialKind::IdealMetal:
    throw Error(ErrorKind::IdealMetalHasNoEpsilon,
                "real-frequency integrand is singular for the ideal metal");
  case MaterialKind::Plasma:
  case MaterialKind::GeneralizedPlasma:
    throw Error(ErrorKind::UnsupportedModel,
                "undamped free carriers put cavity poles on the real frequency axis");
  default:
    break;
  }
}

struct RealAxisReflection {
  complex te;
  complex tm;
  complex bar;
};

RealAxisReflection real_axis_reflection(const MaterialModel& m, complex eps, double k0, complex kz) {
  if (m.kind() == MaterialKind::IdealMetal) return {-1.0, 1.0, 1.0};
  // s^2 = eps k0^2 - k^2 = (eps - 1) k0^2 + k_z^2
  const complex s = branch_sqrt((eps - 1.0) * (k0 * k0) + kz * kz);
  return {(kz - s) / (kz + s), (eps * kz - s) / (eps * kz + s), (eps - 1.0) / (eps + 1.0)};
}

complex real_axis_eps(const MaterialModel& m, double omega) {
  if (m.kind() == MaterialKind::IdealMetal) return 0.0;
  return eval_epsilon(m, omega);
}

// Im{q A/(1-A)} summed over polarizations at real omega for vacuum k_z.
struct QTerms {
  double te;
  double tm;
};

QTerms q_terms(const MaterialModel& m1, const MaterialModel& m2, complex eps1, complex eps2,
               double k0, complex kz, double d) {
  const auto r1 = real_axis_reflection(m1, eps1, k0, kz);
  const auto r2 = real_axis_reflection(m2, eps2, k0, kz);
  const complex q = complex(0.0, -1.0) * kz;
  return {(q * round_trip(r1.te * r2.te, kz, d)).imag(),
          (q * round_trip(r1.tm * r2.tm, kz, d)).imag()};
}

// k-integrals at fixed real omega, split at the light line.
struct LightLineSplit {
  double propagating = 0.0;
  double evanescent = 0.0;
};

LightLineSplit k_integrals(const CavityConfig& config, double omega, double k_rel_tol) {
  const double d = config.d;
  const double k0 = omega / kC;
  const complex eps1 = real_axis_eps(config.material_1, omega);
  const complex eps2 = real_axis_eps(config.material_2, omega);
  LightLineSplit out;

  // Propagating: k dk = k_z dk_z on 0 < k_z < k0; cavity resonances at k_z = n pi / d.
  std::vector<double> breaks{0.0};
  for (long n = 1; n * kPi / d < k0; ++n) breaks.push_back(n * kPi / d);
  breaks.push_back(k0);
  const RealFunction prop = [&](double kz) {
    const auto t = q_terms(config.material_1, config.material_2, eps1, eps2, k0, kz, d);
    return kz * (t.te + t.tm);
  };
  out.propagating = integrate_panels(prop, breaks, k_rel_tol, 0.0, 200000).value;

  // Evanescent: k_z = i kappa, k dk = kappa dkappa.
  const RealFunction evan = [&](double kappa) {
    const auto t = q_terms(config.material_1, config.material_2, eps1, eps2, k0,
                           complex(0.0, kappa), d);
    return kappa * (t.te + t.tm);
  };
  out.evanescent = integrate_semi_infinite(evan, 1.0 / (2.0 * d), k_rel_tol, 20000).value;
  return out;
}

} // namespace

void validate(const CavityConfig& config) {
  if (!(config.d >= 1e-9 && config.d <= 1e-3)) {
    throw Error(ErrorKind::InvalidArgument, "gap width d must lie in [1e-9, 1e-3] m");
  }
  if (!(config.T > 0.0 && config.T <= 1e4)) {
    throw Error(ErrorKind::InvalidArgument, "temperature must lie in (0, 1e4] K");
  }
  if (!(config.rel_tol > 0.0 && config.rel_tol < 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "rel_tol must lie in (0, 1e-2)");
  }
  if (!(config.k_rel_tol > 1e-14 && config.k_rel_tol < 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "k_rel_tol must lie in (1e-14, 1e-2)");
  }
}

double thermal_energy(double omega, double temperature, double hbar) {
  const double x = hbar * omega / (2.0 * kBoltzmann * temperature);
  if (x < 1e-4) {
    // coth x = 1/x + x/3 - x^3/45
    return kBoltzmann * temperature * (1.0 + x * x / 3.0 - x * x * x * x / 45.0);
  }
  return 0.5 * hbar * omega / std::tanh(x);
}

PressureResult pressure_matsubara(const CavityConfig& config) {
  validate(config);
  const double prefactor = -kBoltzmann * config.T / kPi;
  const double xi1 = first_matsubara_frequency(config.T);

  PressureResult result;
  double integration_error = 0.0;
  const auto term = [&](long n) {
    const auto ints = matsubara_integrals(config, n, n * xi1);
    MatsubaraTerm t{n, prefactor * ints.te, prefactor * ints.tm};
    result.per_n.push_back(t);
    integration_error += (n == 0 ? 0.5 : 1.0) * std::abs(prefactor) * ints.error;
    return t.te + t.tm;
  };
  const auto sum = matsubara_sum(term, config.d, config.T, config.rel_tol);

  result.pressure = sum.value;
  result.n_max = sum.n_max;
  result.error_estimate = integration_error + sum.tail_bound;
  result.n0_te = 0.5 * result.per_n.front().te;
  result.n0_tm = 0.5 * result.per_n.front().tm;
  return result;
}

double n0_term(const CavityConfig& config, Polarization polarization) {
  validate(config);
  const auto ints = matsubara_integrals(config, 0, 0.0);
  const double half = -0.5 * kBoltzmann * config.T / kPi;
  return half * (polarization == Polarization::TE ? ints.te : ints.tm);
}

double classical_transverse_pressure(const CavityConfig& config) {
  return n0_term(config, Polarization::TE);
}

PressureResult pressure_real_frequency(const CavityConfig& config, const RealFrequencyConfig& rf) {
  validate(config);
  if (!(rf.hbar > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "real-frequency path needs hbar > 0; use classical_transverse_pressure for hbar -> 0");
  }
  require_real_axis(config.material_1);
  require_real_axis(config.material_2);

  const double omega_cap = rf.omega_cap > 0.0 ? rf.omega_cap : 50.0 * kC / (2.0 * config.d);
  // Smooth cutoff: suppresses the undamped light-line oscillations of the
  // integrand (period pi c / d) instead of truncating them at omega_cap.
  const double window = omega_cap / 4.0;
  const auto weight = [&](double omega) {
    const double u = omega / window;
    return -thermal_energy(omega, config.T, rf.hbar) / omega * std::exp(-u * u) * (1.0 + u * u * (1.0 + 0.5 * u * u)) / (kPi * kPi);
  };
  const RealFunction total = [&](double omega) {
    const auto split = k_integrals(config, omega, rf.k_rel_tol);
    return weight(omega) * (split.propagating + split.evanescent);
  };
  const RealFunction evanescent = [&](double omega) {
    return weight(omega) * k_integrals(config, omega, rf.k_rel_tol).evanescent;
  };

  RealFrequencyOptions options;
  options.panel_width = kPi * kC / (2.0 * config.d);
  const auto all = integrate_real_frequency(total, omega_cap, rf.rel_tol, options);
  const auto ev = integrate_real_frequency(evanescent, omega_cap, rf.rel_tol, options);

  PressureResult result;
  result.pressure = all.value;
  result.error_estimate = all.error_estimate;
  result.evanescent = ev.value;
  result.propagating = all.value - ev.value;
  return result;
}

StressSplit stress_split_integrands(const CavityConfig& config, double omega, double k_perp,
                                    double hbar) {
  if (!(omega > 0.0) || !(k_perp > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "stress integrand needs omega > 0 and k_perp > 0");
  }
  if (config.material_1.kind() == MaterialKind::Tabulated ||
      config.material_2.kind() == MaterialKind::Tabulated) {
    throw Error(ErrorKind::TabulatedOutOfRange, "tabulated models carry no real-axis data");
  }
  const double d = config.d;
  const double k0 = omega / kC;
  const complex eps1 = real_axis_eps(config.material_1, omega);
  const complex eps2 = real_axis_eps(config.material_2, omega);
  const complex kz = branch_sqrt(complex(k0 * k0 - k_perp * k_perp, 0.0));
  const auto r1 = real_axis_reflection(config.material_1, eps1, k0, kz);
  const auto r2 = real_axis_reflection(config.material_2, eps2, k0, kz);
  const double e_over_w = thermal_energy(omega, config.T, hbar) / omega;

  StressSplit out;
  const complex bar_product = r1.bar * r2.bar;
  if (bar_product != 0.0) {
    // X = exp(2 k d) / (rbar_1 rbar_2); the longitudinal term carries (1 - X)^-1
    // and the scalar part of T_perp carries (X - 1)^-1.
    complex inv_one_minus_x, inv_x_minus_one;
    if (2.0 * k_perp * d < 600.0) {
      const complex x = std::exp(2.0 * k_perp * d) / bar_product;
      inv_one_minus_x = 1.0 / (1.0 - x);
      inv_x_minus_one = 1.0 / (x - 1.0);
    } else {
      const complex a = bar_product * std::exp(-2.0 * k_perp * d);
      inv_x_minus_one = a / (1.0 - a);
      inv_one_minus_x = -a / (1.0 - a);
    }
    out.longitudinal = e_over_w / (kPi * kPi) * k_perp * k_perp * inv_one_minus_x.imag();
    out.transverse_scalar = -(2.0 / kPi) * e_over_w / (2.0 * kPi) *
                            (-k_perp * k_perp * inv_x_minus_one.imag());
  }
  const complex q = complex(0.0, -1.0) * kz;
  const double t_pref = -(2.0 / kPi) * e_over_w / (2.0 * kPi) * k_perp;
  out.transverse_propagating_te = t_pref * (q * round_trip(r1.te * r2.te, kz, d)).imag();
  out.transverse_propagating_tm = t_pref * (q * round_trip(r1.tm * r2.tm, kz, d)).imag();
  return out;
}

} // namespace casimir
