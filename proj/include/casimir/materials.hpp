#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace casimir {

using complex = std::complex<double>;

enum class MaterialKind { Insulator, Drude, Plasma, GeneralizedPlasma, IdealMetal, Tabulated };

/// Low-frequency continuation of tabulated imaginary-axis data.
enum class Extrapolation { DrudeLike, PlasmaLike, Finite };

/// Class of the permittivity singularity at zero frequency.
enum class ZeroFreqClass { Finite, InverseOmega, InverseOmegaSquared, Ideal };

/// Drude-Lorentz interband term g / (w0^2 - w^2 - i gamma w).
struct Oscillator {
  double strength; // rad^2/s^2
  double center;   // rad/s
  double width;    // rad/s

  bool operator==(const Oscillator&) const = default;
};

struct TablePoint {
  double xi;  // rad/s
  double eps; // eps(i xi)

  bool operator==(const TablePoint&) const = default;
};

/// Immutable dielectric response. Construct through the named factories,
/// which validate the parameters and throw Error{InvalidModel} otherwise.
class MaterialModel {
public:
  static MaterialModel insulator(double eps0, std::vector<Oscillator> oscillators = {});
  static MaterialModel drude(double omega_p, double gamma);
  static MaterialModel plasma(double omega_p);
  static MaterialModel generalized_plasma(double omega_p, std::vector<Oscillator> oscillators);
  static MaterialModel ideal_metal();
  static MaterialModel tabulated(std::vector<TablePoint> table, Extrapolation extrapolation);

  MaterialKind kind() const noexcept { return kind_; }
  double eps0() const noexcept { return eps0_; }
  double omega_p() const noexcept { return omega_p_; }
  double gamma() const noexcept { return gamma_; }
  std::span<const Oscillator> oscillators() const noexcept { return oscillators_; }
  std::span<const TablePoint> table() const noexcept { return table_; }
  Extrapolation extrapolation() const noexcept { return extrapolation_; }

  /// dc conductivity sigma_0 = omega_p^2 / (4 pi gamma), Gaussian units (rad/s).
  double dc_conductivity() const;

  /// Copy with a different plasma frequency (Drude, Plasma, GeneralizedPlasma).
  MaterialModel with_omega_p(double omega_p) const;

  bool operator==(const MaterialModel&) const = default;

private:
  MaterialModel() = default;

  MaterialKind kind_ = MaterialKind::IdealMetal;
  double eps0_ = 1.0;
  double omega_p_ = 0.0;
  double gamma_ = 0.0;
  std::vector<Oscillator> oscillators_;
  std::vector<TablePoint> table_;
  Extrapolation extrapolation_ = Extrapolation::Finite;
};

/// eps(w) for w on the real axis or the positive imaginary axis.
complex eval_epsilon(const MaterialModel& model, complex w);

/// eps(i xi) as a real number, xi > 0. Works for every kind except IdealMetal.
double eval_epsilon_imaginary(const MaterialModel& model, double xi);

/// Log-log interpolation of tabulated eps(i xi) with the model's low-frequency
/// continuation below the table and 1 + C/xi^2 above it.
double eval_epsilon_tabulated(const MaterialModel& model, double xi);

ZeroFreqClass zero_freq_class(const MaterialModel& model);

/// eps(0) for models of the Finite class.
double static_permittivity(const MaterialModel& model);

/// Coefficient B of the B/xi^2 low-frequency singularity of eps(i xi), i.e. the
/// squared plasma frequency, for models of the InverseOmegaSquared class.
double static_plasma_frequency_squared(const MaterialModel& model);

/// Tabulated-data text format: '#' comments, whitespace separated "xi eps" lines.
std::vector<TablePoint> parse_table(const std::string& text);
std::vector<TablePoint> load_table(const std::string& path);

std::string to_string(MaterialKind kind);
std::string to_string(Extrapolation extrapolation);
std::string to_string(ZeroFreqClass cls);
Extrapolation parse_extrapolation(const std::string& name);
ZeroFreqClass parse_zero_freq_class(const std::string& name);

} // namespace casimir
