#include "casimir/bvl.hpp"

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/fresnel.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace casimir {
namespace {

double frobenius(const Tensor3& t) {
  double sum = 0.0;
  for (const auto& row : t) {
    for (double v : row) sum += v * v;
  }
  return std::sqrt(sum);
}

double fitted_exponent(const std::vector<Sample>& samples) {
  bool all_zero = true;
  for (const auto& s : samples) all_zero = all_zero && s.y == 0.0;
  if (all_zero) return std::numeric_limits<double>::infinity();
  return fit_power_law(samples).exponent;
}

} // namespace

Tensor3 b_correlator_classical(const MaterialModel& model, SlabPoint point,
                               double min_separation) {
  if (!(point.z > 0.0) || !(point.z_prime > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "probe points must lie outside the slab (z > 0)");
  }
  const double sum_z = point.z + point.z_prime;
  if (sum_z < min_separation) {
    throw Error(ErrorKind::SurfaceContact, "classical correlator diverges at the surface");
  }
  Tensor3 tensor{};
  const auto cls = zero_freq_class(model);
  if (cls == ZeroFreqClass::Finite || cls == ZeroFreqClass::InverseOmega) return tensor;

  // zz: integral of k^2 r_te(0, k) exp(-k (z + z')); the k_x k_x and k_y k_y
  // terms average to one half of it, the mixed terms average to zero.
  const RealFunction f = [&](double k) {
    if (k == 0.0) return 0.0;
    return k * k * reflection_static(model, k).r_te * std::exp(-k * sum_z);
  };
  const double zz = integrate_semi_infinite(f, 1.0 / sum_z, 1e-12).value;
  tensor[0][0] = 0.5 * zz;
  tensor[1][1] = 0.5 * zz;
  tensor[2][2] = zz;
  return tensor;
}

double e_correlator_limit_exponent(const MaterialModel& model, double k_perp,
                                   std::span<const double> omega_sweep) {
  if (omega_sweep.size() < 5) {
    throw Error(ErrorKind::DegenerateSweep, "classical-limit sweep needs at least five frequencies");
  }
  if (!(k_perp > 0.0)) throw Error(ErrorKind::InvalidArgument, "k_perp must be positive");
  std::vector<Sample> te, gap;
  for (std::size_t i = 0; i < omega_sweep.size(); ++i) {
    const double w = omega_sweep[i];
    if (!(w > 0.0) || (i > 0 && !(w < omega_sweep[i - 1]))) {
      throw Error(ErrorKind::DegenerateSweep, "sweep must be positive and strictly decreasing");
    }
    const double k0 = w / kSpeedOfLight;
    if (model.kind() == MaterialKind::Tabulated) {
      // Tabulated data exist on the imaginary axis only; the low-frequency power
      // laws are the same along w = i xi.
      const auto r = reflection_imaginary(model, w, k_perp);
      te.push_back({w, std::abs(k0 * k0 * r.r_te)});
      gap.push_back({w, std::abs(r.r_tm - r.r_bar)});
      continue;
    }
    const auto r = reflection(model, w, k_perp);
    te.push_back({w, std::abs(k0 * k0 * r.r_te)});
    gap.push_back({w, std::abs(r.r_tm - r.r_bar)});
  }
  return std::min(fitted_exponent(te), fitted_exponent(gap));
}

std::array<double, 7> classical_limit_sweep(double k_perp) {
  std::array<double, 7> sweep{};
  const double top = 1e-3 * kSpeedOfLight * k_perp;
  for (std::size_t i = 0; i < sweep.size(); ++i) sweep[i] = top * std::pow(10.0, -0.5 * i);
  return sweep;
}

BvLReport bvl_verdict(const MaterialModel& model, double d, double temperature, double z_probe,
                      double threshold) {
  if (!(z_probe > 0.0)) throw Error(ErrorKind::InvalidArgument, "probe distance must be positive");
  const auto ideal = MaterialModel::ideal_metal();

  BvLReport report;
  report.model_class = zero_freq_class(model);
  report.b_tensor = b_correlator_classical(model, {z_probe, z_probe});
  report.b_reference_tensor = b_correlator_classical(ideal, {z_probe, z_probe});
  report.b_correlator_norm = frobenius(report.b_tensor) / frobenius(report.b_reference_tensor);

  const double k_probe = 1.0 / z_probe;
  const auto sweep = classical_limit_sweep(k_probe);
  report.e_limit_exponent = e_correlator_limit_exponent(model, k_probe, sweep);

  CavityConfig cavity;
  cavity.material_1 = model;
  cavity.material_2 = model;
  cavity.d = d;
  cavity.T = temperature;
  report.cavity_classical_te = classical_transverse_pressure(cavity);
  cavity.material_1 = ideal;
  cavity.material_2 = ideal;
  report.reference_scale = classical_transverse_pressure(cavity);

  const bool decoupled = report.b_correlator_norm < threshold &&
                         std::abs(report.cavity_classical_te) / std::abs(report.reference_scale) <
                             threshold;
  report.verdict = decoupled ? Verdict::Pass : Verdict::Fail;
  return report;
}

std::string to_string(Verdict verdict) { return verdict == Verdict::Pass ? "Pass" : "Fail"; }

Verdict parse_verdict(const std::string& name) {
  if (name == "Pass") return Verdict::Pass;
  if (name == "Fail") return Verdict::Fail;
  throw Error(ErrorKind::ConfigParse, "unknown verdict '" + name + "'");
}

} // namespace casimir
