#pragma once

#include "casimir/bvl.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace casimir::cli {

/// Compact one-line material specs:
///   ideal | insulator:<eps0>[;g,w0,gamma...] | drude:<omega_p>,<gamma>
///   plasma:<omega_p> | gplasma:<omega_p>;<g>,<w0>,<gamma>;... | table:<path>,<extrapolation>
MaterialModel parse_material_spec(const std::string& spec);

struct Tolerances {
  double rel_tol = 1e-9;     // Matsubara sum
  double k_rel_tol = 1e-8;   // k_perp integrals
  double rf_rel_tol = 5e-2;  // real-frequency integral
  double omega_cap = 0.0;    // 0 = 50 c / (2 d)

  bool operator==(const Tolerances&) const = default;
};

struct SweepSpec {
  std::string param;  // d | T | omega_p
  double from = 0.0;
  double to = 0.0;
  int points = 0;
  bool log = false;
  std::vector<std::string> reference; // optional second cavity for a ratio column

  bool operator==(const SweepSpec&) const = default;
};

struct ProbeSpec {
  std::string mode; // omega | xi | static
  double frequency = 0.0;
  std::vector<double> k_perp;

  bool operator==(const ProbeSpec&) const = default;
};

struct OutputSpec {
  std::string path;   // empty = standard output
  std::string format; // csv | json; empty = per-subcommand default

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  std::string subcommand; // pressure | sweep | bvl-check | reflect
  std::vector<std::string> materials;
  std::optional<double> d;
  std::optional<double> T;
  std::optional<double> z;
  std::string method = "matsubara"; // matsubara | realfreq
  Tolerances tolerances;
  std::optional<SweepSpec> sweep;
  std::optional<ProbeSpec> probe;
  OutputSpec output;

  bool operator==(const RunConfig&) const = default;
};

/// Throws Error{ConfigParse} unless exactly the fields the subcommand needs are set.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
/// Strict: unknown keys and wrong types are ConfigParse errors.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

std::string output_format(const RunConfig& config);

nlohmann::json to_json(const BvLReport& report);
BvLReport bvl_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PressureResult& result);
PressureResult pressure_result_from_json(const nlohmann::json& j);

/// Decoded report document: the echoed configuration plus the result.
std::pair<RunConfig, BvLReport> parse_bvl_document(const std::string& text);
std::pair<RunConfig, PressureResult> parse_pressure_document(const std::string& text);

/// Subcommand runners. They write the report to `out`, diagnostics to `err`,
/// and return the exit status (0 ok, 2 configuration error, 3 numerical failure).
int run_pressure(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_bvl_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_reflect(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand, honouring config.output.path.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes "<ErrorName>: message" to `err` and returns the matching exit status.
int report_error(const std::exception& error, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

} // namespace casimir::cli
