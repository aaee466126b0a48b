#include "casimir/materials.hpp"

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace casimir {
namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::InvalidModel, message);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void validate_oscillators(const std::vector<Oscillator>& oscillators) {
  for (const auto& osc : oscillators) {
    require(positive_finite(osc.strength) && positive_finite(osc.center) &&
                positive_finite(osc.width),
            "oscillator strength, center and width must be positive");
  }
}

complex oscillator_sum(std::span<const Oscillator> oscillators, complex w) {
  complex sum = 0.0;
  for (const auto& osc : oscillators) {
    sum += osc.strength / (osc.center * osc.center - w * w - complex(0.0, osc.width) * w);
  }
  return sum;
}

double oscillator_sum_imaginary(std::span<const Oscillator> oscillators, double xi) {
  double sum = 0.0;
  for (const auto& osc : oscillators) {
    sum += osc.strength / (osc.center * osc.center + xi * xi + osc.width * xi);
  }
  return sum;
}

// Coefficient of the low-frequency continuation eps0 + A (xi^-p - xi0^-p),
// fitted to the two lowest table points.
double low_frequency_coefficient(std::span<const TablePoint> table, double power) {
  const auto& p0 = table[0];
  const auto& p1 = table[1];
  return (p0.eps - p1.eps) / (std::pow(p0.xi, -power) - std::pow(p1.xi, -power));
}

double extrapolation_power(Extrapolation extrapolation) {
  switch (extrapolation) {
  case Extrapolation::DrudeLike: return 1.0;
  case Extrapolation::PlasmaLike: return 2.0;
  case Extrapolation::Finite: return 0.0;
  }
  return 0.0;
}

} // namespace

MaterialModel MaterialModel::insulator(double eps0, std::vector<Oscillator> oscillators) {
  require(std::isfinite(eps0) && eps0 >= 1.0, "insulator eps0 must be >= 1");
  validate_oscillators(oscillators);
  MaterialModel m;
  m.kind_ = MaterialKind::Insulator;
  m.eps0_ = eps0;
  m.oscillators_ = std::move(oscillators);
  return m;
}

MaterialModel MaterialModel::drude(double omega_p, double gamma) {
  require(positive_finite(omega_p), "drude omega_p must be positive");
  require(positive_finite(gamma), "drude gamma must be positive");
  MaterialModel m;
  m.kind_ = MaterialKind::Drude;
  m.omega_p_ = omega_p;
  m.gamma_ = gamma;
  return m;
}

MaterialModel MaterialModel::plasma(double omega_p) {
  require(positive_finite(omega_p), "plasma omega_p must be positive");
  MaterialModel m;
  m.kind_ = MaterialKind::Plasma;
  m.omega_p_ = omega_p;
  return m;
}

MaterialModel MaterialModel::generalized_plasma(double omega_p,
                                                std::vector<Oscillator> oscillators) {
  require(positive_finite(omega_p), "generalized plasma omega_p must be positive");
  validate_oscillators(oscillators);
  MaterialModel m;
  m.kind_ = MaterialKind::GeneralizedPlasma;
  m.omega_p_ = omega_p;
  m.oscillators_ = std::move(oscillators);
  return m;
}

MaterialModel MaterialModel::ideal_metal() {
  MaterialModel m;
  m.kind_ = MaterialKind::IdealMetal;
  return m;
}

MaterialModel MaterialModel::tabulated(std::vector<TablePoint> table,
                                       Extrapolation extrapolation) {
  if (table.size() < 2) {
    throw Error(ErrorKind::EmptyTable, "tabulated model needs at least two points");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    require(positive_finite(table[i].xi), "table frequencies must be positive");
    require(std::isfinite(table[i].eps) && table[i].eps >= 1.0, "table values must be >= 1");
    if (i > 0) require(table[i].xi > table[i - 1].xi, "table frequencies must increase");
  }
  if (extrapolation != Extrapolation::Finite) {
    require(low_frequency_coefficient(table, extrapolation_power(extrapolation)) > 0.0,
            "low-frequency continuation needs eps(i xi) decreasing over the two lowest points");
  }
  MaterialModel m;
  m.kind_ = MaterialKind::Tabulated;
  m.table_ = std::move(table);
  m.extrapolation_ = extrapolation;
  return m;
}

double MaterialModel::dc_conductivity() const {
  if (kind_ != MaterialKind::Drude) {
    throw Error(ErrorKind::InvalidArgument, "dc conductivity is defined for Drude models only");
  }
  return omega_p_ * omega_p_ / (4.0 * kPi * gamma_);
}

MaterialModel MaterialModel::with_omega_p(double omega_p) const {
  switch (kind_) {
  case MaterialKind::Drude: return drude(omega_p, gamma_);
  case MaterialKind::Plasma: return plasma(omega_p);
  case MaterialKind::GeneralizedPlasma: return generalized_plasma(omega_p, oscillators_);
  default:
    throw Error(ErrorKind::InvalidArgument, "model " + to_string(kind_) + " has no plasma frequency");
  }
}

complex eval_epsilon(const MaterialModel& model, complex w) {
  if (model.kind() == MaterialKind::IdealMetal) {
    throw Error(ErrorKind::IdealMetalHasNoEpsilon, "ideal metal is defined by its reflection coefficients");
  }
  if (w.real() == 0.0 && w.imag() > 0.0) return eval_epsilon_imaginary(model, w.imag());

  const double wp2 = model.omega_p() * model.omega_p();
  switch (model.kind()) {
  case MaterialKind::Insulator:
    return model.eps0() + oscillator_sum(model.oscillators(), w);
  case MaterialKind::Drude:
    if (w == 0.0) throw Error(ErrorKind::EvalAtZero, "Drude permittivity is singular at zero frequency");
    return 1.0 - wp2 / (w * (w + complex(0.0, model.gamma())));
  case MaterialKind::Plasma:
    if (w == 0.0) throw Error(ErrorKind::EvalAtZero, "plasma permittivity is singular at zero frequency");
    return 1.0 - wp2 / (w * w);
  case MaterialKind::GeneralizedPlasma:
    if (w == 0.0) throw Error(ErrorKind::EvalAtZero, "plasma permittivity is singular at zero frequency");
    return 1.0 - wp2 / (w * w) + oscillator_sum(model.oscillators(), w);
  case MaterialKind::Tabulated:
    throw Error(ErrorKind::TabulatedOutOfRange, "tabulated models are defined on the imaginary axis only");
  case MaterialKind::IdealMetal:
    break;
  }
  throw Error(ErrorKind::IdealMetalHasNoEpsilon, "unreachable");
}

double eval_epsilon_imaginary(const MaterialModel& model, double xi) {
  if (!(xi > 0.0)) {
    if (xi == 0.0 && model.kind() == MaterialKind::Insulator) return static_permittivity(model);
    if (xi == 0.0) throw Error(ErrorKind::EvalAtZero, "permittivity evaluated at zero frequency");
    throw Error(ErrorKind::InvalidArgument, "imaginary frequency must be positive");
  }
  const double wp2 = model.omega_p() * model.omega_p();
  switch (model.kind()) {
  case MaterialKind::Insulator:
    return model.eps0() + oscillator_sum_imaginary(model.oscillators(), xi);
  case MaterialKind::Drude:
    return 1.0 + wp2 / (xi * (xi + model.gamma()));
  case MaterialKind::Plasma:
    return 1.0 + wp2 / (xi * xi);
  case MaterialKind::GeneralizedPlasma:
    return 1.0 + wp2 / (xi * xi) + oscillator_sum_imaginary(model.oscillators(), xi);
  case MaterialKind::Tabulated:
    return eval_epsilon_tabulated(model, xi);
  case MaterialKind::IdealMetal:
    break;
  }
  throw Error(ErrorKind::IdealMetalHasNoEpsilon, "ideal metal is defined by its reflection coefficients");
}

double eval_epsilon_tabulated(const MaterialModel& model, double xi) {
  if (model.kind() != MaterialKind::Tabulated) {
    throw Error(ErrorKind::InvalidArgument, "model is not tabulated");
  }
  const auto table = model.table();
  if (table.size() < 2) throw Error(ErrorKind::EmptyTable, "table has fewer than two points");
  if (!(xi > 0.0)) throw Error(ErrorKind::InvalidArgument, "imaginary frequency must be positive");

  const auto& lo = table.front();
  const auto& hi = table.back();
  if (xi < lo.xi) {
    const double power = extrapolation_power(model.extrapolation());
    if (power == 0.0) return lo.eps;
    const double a = low_frequency_coefficient(table, power);
    return lo.eps + a * (std::pow(xi, -power) - std::pow(lo.xi, -power));
  }
  if (xi > hi.xi) {
    return 1.0 + (hi.eps - 1.0) * (hi.xi / xi) * (hi.xi / xi);
  }
  auto upper = std::upper_bound(table.begin(), table.end(), xi,
                                [](double x, const TablePoint& p) { return x < p.xi; });
  if (upper == table.end()) return hi.eps;
  const auto& b = *upper;
  const auto& a = *(upper - 1);
  if (xi == a.xi) return a.eps;
  const double t = std::log(xi / a.xi) / std::log(b.xi / a.xi);
  return std::exp((1.0 - t) * std::log(a.eps) + t * std::log(b.eps));
}

ZeroFreqClass zero_freq_class(const MaterialModel& model) {
  switch (model.kind()) {
  case MaterialKind::Insulator: return ZeroFreqClass::Finite;
  case MaterialKind::Drude: return ZeroFreqClass::InverseOmega;
  case MaterialKind::Plasma:
  case MaterialKind::GeneralizedPlasma: return ZeroFreqClass::InverseOmegaSquared;
  case MaterialKind::IdealMetal: return ZeroFreqClass::Ideal;
  case MaterialKind::Tabulated:
    switch (model.extrapolation()) {
    case Extrapolation::DrudeLike: return ZeroFreqClass::InverseOmega;
    case Extrapolation::PlasmaLike: return ZeroFreqClass::InverseOmegaSquared;
    case Extrapolation::Finite: return ZeroFreqClass::Finite;
    }
  }
  return ZeroFreqClass::Finite;
}

double static_permittivity(const MaterialModel& model) {
  if (zero_freq_class(model) != ZeroFreqClass::Finite) {
    throw Error(ErrorKind::EvalAtZero, "model has no finite static permittivity");
  }
  if (model.kind() == MaterialKind::Tabulated) return model.table().front().eps;
  return model.eps0() + oscillator_sum_imaginary(model.oscillators(), 0.0);
}

double static_plasma_frequency_squared(const MaterialModel& model) {
  if (zero_freq_class(model) != ZeroFreqClass::InverseOmegaSquared) {
    throw Error(ErrorKind::InvalidArgument, "model is not plasma-like at zero frequency");
  }
  if (model.kind() == MaterialKind::Tabulated) return low_frequency_coefficient(model.table(), 2.0);
  return model.omega_p() * model.omega_p();
}

std::vector<TablePoint> parse_table(const std::string& text) {
  std::vector<TablePoint> table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    TablePoint p{};
    std::string extra;
    if (!(fields >> p.xi >> p.eps) || (fields >> extra)) {
      throw Error(ErrorKind::ConfigParse, "table line " + std::to_string(line_no) + ": expected 'xi eps'");
    }
    table.push_back(p);
  }
  return table;
}

std::vector<TablePoint> load_table(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::ConfigParse, "cannot open table file '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_table(buffer.str());
}

std::string to_string(MaterialKind kind) {
  switch (kind) {
  case MaterialKind::Insulator: return "Insulator";
  case MaterialKind::Drude: return "Drude";
  case MaterialKind::Plasma: return "Plasma";
  case MaterialKind::GeneralizedPlasma: return "GeneralizedPlasma";
  case MaterialKind::IdealMetal: return "IdealMetal";
  case MaterialKind::Tabulated: return "Tabulated";
  }
  return "Unknown";
}

std::string to_string(Extrapolation extrapolation) {
  switch (extrapolation) {
  case Extrapolation::DrudeLike: return "DrudeLike";
  case Extrapolation::PlasmaLike: return "PlasmaLike";
  case Extrapolation::Finite: return "Finite";
  }
  return "Unknown";
}

std::string to_string(ZeroFreqClass cls) {
  switch (cls) {
  case ZeroFreqClass::Finite: return "Finite";
  case ZeroFreqClass::InverseOmega: return "InverseOmega";
  case ZeroFreqClass::InverseOmegaSquared: return "InverseOmegaSquared";
  case ZeroFreqClass::Ideal: return "Ideal";
  }
  return "Unknown";
}

Extrapolation parse_extrapolation(const std::string& name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "drudelike" || lower == "drude") return Extrapolation::DrudeLike;
  if (lower == "plasmalike" || lower == "plasma") return Extrapolation::PlasmaLike;
  if (lower == "finite") return Extrapolation::Finite;
  throw Error(ErrorKind::ConfigParse, "unknown extrapolation '" + name + "'");
}

ZeroFreqClass parse_zero_freq_class(const std::string& name) {
  for (auto cls : {ZeroFreqClass::Finite, ZeroFreqClass::InverseOmega,
                   ZeroFreqClass::InverseOmegaSquared, ZeroFreqClass::Ideal}) {
    if (to_string(cls) == name) return cls;
  }
  throw Error(ErrorKind::ConfigParse, "unknown zero-frequency class '" + name + "'");
}

} // namespace casimir
