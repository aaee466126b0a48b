#include "casimir/cli.hpp"

#include "casimir/error.hpp"
#include "casimir/fresnel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace casimir::cli {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorKind::ConfigParse, message);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, delim)) parts.push_back(trim(part));
  if (!s.empty() && s.back() == delim) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) config_error("missing number for " + what);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(value)) {
    config_error("invalid number '" + t + "' for " + what);
  }
  return value;
}

std::vector<Oscillator> parse_oscillators(const std::vector<std::string>& groups,
                                          const std::string& spec) {
  std::vector<Oscillator> oscillators;
  for (const auto& group : groups) {
    const auto fields = split(group, ',');
    if (fields.size() != 3) config_error("oscillator needs 'g,w0,gamma' in '" + spec + "'");
    oscillators.push_back({parse_number(fields[0], "oscillator strength"),
                           parse_number(fields[1], "oscillator center"),
                           parse_number(fields[2], "oscillator width")});
  }
  return oscillators;
}

// Signed zeros would make "exactly 0" fields print as -0.
double clean(double v) { return v == 0.0 ? 0.0 : v; }

std::string number(double v) {
  v = clean(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

template <class T>
T get_typed(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("field '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be a JSON object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!names.count(item.key())) config_error("unknown key '" + item.key() + "' in " + where);
  }
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) config_error(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

json tensor_json(const Tensor3& t) {
  json rows = json::array();
  for (const auto& row : t) {
    json r = json::array();
    for (double v : row) r.push_back(clean(v));
    rows.push_back(r);
  }
  return rows;
}

CavityConfig cavity_from(const MaterialModel& m1, const MaterialModel& m2, double d, double T,
                         const Tolerances& tol) {
  CavityConfig cavity;
  cavity.material_1 = m1;
  cavity.material_2 = m2;
  cavity.d = d;
  cavity.T = T;
  cavity.rel_tol = tol.rel_tol;
  cavity.k_rel_tol = tol.k_rel_tol;
  return cavity;
}

PressureResult evaluate(const CavityConfig& cavity, const RunConfig& config) {
  if (config.method == "realfreq") {
    RealFrequencyConfig rf;
    rf.rel_tol = config.tolerances.rf_rel_tol;
    rf.omega_cap = config.tolerances.omega_cap;
    return pressure_real_frequency(cavity, rf);
  }
  return pressure_matsubara(cavity);
}

void write_csv_preamble(const RunConfig& config, std::ostream& out) {
  out << "# casimir-bvl " << config.subcommand << "\n";
  out << "# config = " << to_json(config).dump() << "\n";
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

std::vector<double> sweep_values(const SweepSpec& sweep) {
  std::vector<double> values(static_cast<std::size_t>(sweep.points));
  for (int i = 0; i < sweep.points; ++i) {
    const double t = static_cast<double>(i) / (sweep.points - 1);
    values[static_cast<std::size_t>(i)] =
        sweep.log ? sweep.from * std::pow(sweep.to / sweep.from, t)
                  : sweep.from + (sweep.to - sweep.from) * t;
  }
  values.back() = sweep.to;
  return values;
}

MaterialModel apply_omega_p(const MaterialModel& m, double omega_p) {
  switch (m.kind()) {
  case MaterialKind::Drude:
  case MaterialKind::Plasma:
  case MaterialKind::GeneralizedPlasma: return m.with_omega_p(omega_p);
  default: return m;
  }
}

struct SweepRow {
  double value = 0.0;
  PressureResult result;
  std::optional<double> reference;
};

} // namespace

MaterialModel parse_material_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const bool has_body = colon != std::string::npos;

  if (head == "ideal") {
    if (has_body) config_error("'ideal' takes no parameters");
    return MaterialModel::ideal_metal();
  }
  if (!has_body || body.empty()) config_error("material '" + spec + "' needs parameters");
  if (head == "insulator") {
    auto groups = split(body, ';');
    const double eps0 = parse_number(groups.front(), "insulator eps0");
    groups.erase(groups.begin());
    return MaterialModel::insulator(eps0, parse_oscillators(groups, spec));
  }
  if (head == "drude") {
    const auto fields = split(body, ',');
    if (fields.size() != 2) config_error("drude needs '<omega_p>,<gamma>'");
    return MaterialModel::drude(parse_number(fields[0], "drude omega_p"),
                                parse_number(fields[1], "drude gamma"));
  }
  if (head == "plasma") {
    return MaterialModel::plasma(parse_number(body, "plasma omega_p"));
  }
  if (head == "gplasma") {
    auto groups = split(body, ';');
    const double wp = parse_number(groups.front(), "gplasma omega_p");
    groups.erase(groups.begin());
    return MaterialModel::generalized_plasma(wp, parse_oscillators(groups, spec));
  }
  if (head == "table") {
    const auto comma = body.rfind(',');
    if (comma == std::string::npos) config_error("table needs '<path>,<extrapolation>'");
    const auto extrapolation = parse_extrapolation(trim(body.substr(comma + 1)));
    return MaterialModel::tabulated(load_table(trim(body.substr(0, comma))), extrapolation);
  }
  config_error("unknown material kind '" + head + "'");
}

int report_error(const std::exception& error, std::ostream& err) {
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    err << e->what() << "\n";
    return is_numerical_failure(e->kind()) ? kExitNumerical : kExitConfig;
  }
  if (dynamic_cast<const json::exception*>(&error)) {
    err << "ConfigParse: " << error.what() << "\n";
    return kExitConfig;
  }
  err << "NumericalFailure: " << error.what() << "\n";
  return kExitNumerical;
}

void validate(const RunConfig& config) {
  const auto& sc = config.subcommand;
  const bool is_pressure = sc == "pressure";
  const bool is_sweep = sc == "sweep";
  const bool is_bvl = sc == "bvl-check";
  const bool is_reflect = sc == "reflect";
  if (!(is_pressure || is_sweep || is_bvl || is_reflect)) {
    config_error("unknown subcommand '" + sc + "'");
  }
  const std::size_t want_materials = (is_pressure || is_sweep) ? 2 : 1;
  if (config.materials.size() != want_materials) {
    config_error(sc + " needs " + std::to_string(want_materials) + " material spec(s)");
  }
  if (config.method != "matsubara" && config.method != "realfreq") {
    config_error("method must be 'matsubara' or 'realfreq'");
  }
  if (!config.output.format.empty() && config.output.format != "csv" &&
      config.output.format != "json") {
    config_error("output format must be 'csv' or 'json'");
  }
  if (config.sweep && !is_sweep) config_error("sweep settings are only valid for 'sweep'");
  if (config.probe && !is_reflect) config_error("probe settings are only valid for 'reflect'");
  if (config.z && !is_bvl) config_error("--z is only valid for 'bvl-check'");

  if (is_pressure || is_bvl) {
    if (!config.d) config_error(sc + " needs --d");
    if (!config.T) config_error(sc + " needs --T");
  }
  if (is_bvl && !config.z) config_error("bvl-check needs --z");
  if (is_reflect && (config.d || config.T)) config_error("reflect takes no geometry");
  if (is_reflect) {
    if (!config.probe) config_error("reflect needs one of --omega, --xi, --static and --kperp");
    const auto& p = *config.probe;
    if (p.mode != "omega" && p.mode != "xi" && p.mode != "static") {
      config_error("probe mode must be omega, xi or static");
    }
    if (p.mode != "static" && !(p.frequency > 0.0)) config_error("probe frequency must be positive");
    if (p.k_perp.empty()) config_error("reflect needs at least one k_perp value");
  }
  if (is_sweep) {
    if (!config.sweep) config_error("sweep needs --param, --from, --to and --points");
    const auto& s = *config.sweep;
    if (s.param != "d" && s.param != "T" && s.param != "omega_p") {
      config_error("sweep parameter must be d, T or omega_p");
    }
    if (!(s.from < s.to)) config_error("sweep range needs from < to");
    if (s.points < 2) config_error("sweep needs at least 2 points");
    if (s.log && !(s.from > 0.0)) config_error("logarithmic sweep needs a positive start");
    if (!s.reference.empty() && s.reference.size() != 2) {
      config_error("sweep reference needs two material specs");
    }
    if (s.param == "d" && config.d) config_error("swept parameter d must not be fixed");
    if (s.param == "T" && config.T) config_error("swept parameter T must not be fixed");
    if (s.param != "d" && !config.d) config_error("sweep needs --d");
    if (s.param != "T" && !config.T) config_error("sweep needs --T");
  }
}

json to_json(const RunConfig& config) {
  json j;
  j["subcommand"] = config.subcommand;
  j["materials"] = config.materials;
  j["d"] = config.d ? json(*config.d) : json(nullptr);
  j["T"] = config.T ? json(*config.T) : json(nullptr);
  j["z"] = config.z ? json(*config.z) : json(nullptr);
  j["method"] = config.method;
  j["tolerances"] = {{"rel_tol", config.tolerances.rel_tol},
                     {"k_rel_tol", config.tolerances.k_rel_tol},
                     {"rf_rel_tol", config.tolerances.rf_rel_tol},
                     {"omega_cap", config.tolerances.omega_cap}};
  if (config.sweep) {
    const auto& s = *config.sweep;
    j["sweep"] = {{"param", s.param}, {"from", s.from},   {"to", s.to},
                  {"points", s.points}, {"log", s.log}, {"reference", s.reference}};
  } else {
    j["sweep"] = nullptr;
  }
  if (config.probe) {
    const auto& p = *config.probe;
    j["probe"] = {{"mode", p.mode}, {"frequency", p.frequency}, {"k_perp", p.k_perp}};
  } else {
    j["probe"] = nullptr;
  }
  j["output"] = {{"path", config.output.path}, {"format", config.output.format}};
  return j;
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j, {"subcommand", "materials", "d", "T", "z", "method", "tolerances", "sweep",
                 "probe", "output"},
             "config");
  RunConfig config;
  config.subcommand = get_typed<std::string>(j, "subcommand");
  config.materials = get_typed<std::vector<std::string>>(j, "materials");
  config.d = optional_number(j, "d");
  config.T = optional_number(j, "T");
  config.z = optional_number(j, "z");
  if (j.contains("method")) config.method = get_typed<std::string>(j, "method");
  if (j.contains("tolerances") && !j.at("tolerances").is_null()) {
    const auto& t = j.at("tolerances");
    check_keys(t, {"rel_tol", "k_rel_tol", "rf_rel_tol", "omega_cap"}, "tolerances");
    if (auto v = optional_number(t, "rel_tol")) config.tolerances.rel_tol = *v;
    if (auto v = optional_number(t, "k_rel_tol")) config.tolerances.k_rel_tol = *v;
    if (auto v = optional_number(t, "rf_rel_tol")) config.tolerances.rf_rel_tol = *v;
    if (auto v = optional_number(t, "omega_cap")) config.tolerances.omega_cap = *v;
  }
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const auto& s = j.at("sweep");
    check_keys(s, {"param", "from", "to", "points", "log", "reference"}, "sweep");
    SweepSpec sweep;
    sweep.param = get_typed<std::string>(s, "param");
    sweep.from = get_typed<double>(s, "from");
    sweep.to = get_typed<double>(s, "to");
    sweep.points = get_typed<int>(s, "points");
    if (s.contains("log")) sweep.log = get_typed<bool>(s, "log");
    if (s.contains("reference")) sweep.reference = get_typed<std::vector<std::string>>(s, "reference");
    config.sweep = sweep;
  }
  if (j.contains("probe") && !j.at("probe").is_null()) {
    const auto& p = j.at("probe");
    check_keys(p, {"mode", "frequency", "k_perp"}, "probe");
    ProbeSpec probe;
    probe.mode = get_typed<std::string>(p, "mode");
    if (p.contains("frequency")) probe.frequency = get_typed<double>(p, "frequency");
    probe.k_perp = get_typed<std::vector<double>>(p, "k_perp");
    config.probe = probe;
  }
  if (j.contains("output") && !j.at("output").is_null()) {
    const auto& o = j.at("output");
    check_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) config.output.path = get_typed<std::string>(o, "path");
    if (o.contains("format")) config.output.format = get_typed<std::string>(o, "format");
  }
  validate(config);
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) config_error("cannot open config file '" + path + "'");
  json j;
  try {
    file >> j;
  } catch (const json::exception& e) {
    config_error(std::string("malformed JSON config: ") + e.what());
  }
  return run_config_from_json(j);
}

std::string output_format(const RunConfig& config) {
  if (!config.output.format.empty()) return config.output.format;
  return config.subcommand == "bvl-check" ? "json" : "csv";
}

json to_json(const BvLReport& report) {
  return {{"model_class", to_string(report.model_class)},
          {"b_correlator_norm", clean(report.b_correlator_norm)},
          {"e_limit_exponent", std::isinf(report.e_limit_exponent) ? json("inf")
                                                                   : json(report.e_limit_exponent)},
          {"cavity_classical_te_pa", clean(report.cavity_classical_te)},
          {"reference_scale", report.reference_scale},
          {"verdict", to_string(report.verdict)},
          {"b_tensor", tensor_json(report.b_tensor)},
          {"b_reference_tensor", tensor_json(report.b_reference_tensor)}};
}

BvLReport bvl_report_from_json(const json& j) {
  BvLReport report;
  report.model_class = parse_zero_freq_class(get_typed<std::string>(j, "model_class"));
  report.b_correlator_norm = get_typed<double>(j, "b_correlator_norm");
  const auto& e = j.at("e_limit_exponent");
  report.e_limit_exponent = e.is_string() ? std::numeric_limits<double>::infinity() : e.get<double>();
  report.cavity_classical_te = get_typed<double>(j, "cavity_classical_te_pa");
  report.reference_scale = get_typed<double>(j, "reference_scale");
  report.verdict = parse_verdict(get_typed<std::string>(j, "verdict"));
  if (j.contains("b_tensor")) report.b_tensor = get_typed<Tensor3>(j, "b_tensor");
  if (j.contains("b_reference_tensor")) {
    report.b_reference_tensor = get_typed<Tensor3>(j, "b_reference_tensor");
  }
  return report;
}

json to_json(const PressureResult& r) {
  json per_n = json::array();
  for (const auto& t : r.per_n) {
    per_n.push_back({{"n", t.n}, {"te", clean(t.te)}, {"tm", clean(t.tm)}});
  }
  return {{"pressure", r.pressure},     {"error_estimate", r.error_estimate},
          {"n0_te", clean(r.n0_te)},    {"n0_tm", clean(r.n0_tm)},
          {"n_max", r.n_max},           {"per_n", per_n},
          {"evanescent", r.evanescent}, {"propagating", r.propagating}};
}

PressureResult pressure_result_from_json(const json& j) {
  PressureResult r;
  r.pressure = get_typed<double>(j, "pressure");
  r.error_estimate = get_typed<double>(j, "error_estimate");
  r.n0_te = get_typed<double>(j, "n0_te");
  r.n0_tm = get_typed<double>(j, "n0_tm");
  r.n_max = get_typed<long>(j, "n_max");
  for (const auto& t : j.at("per_n")) {
    r.per_n.push_back({get_typed<long>(t, "n"), get_typed<double>(t, "te"), get_typed<double>(t, "tm")});
  }
  r.evanescent = get_typed<double>(j, "evanescent");
  r.propagating = get_typed<double>(j, "propagating");
  return r;
}

std::pair<RunConfig, BvLReport> parse_bvl_document(const std::string& text) {
  const json j = json::parse(text);
  return {run_config_from_json(j.at("config")), bvl_report_from_json(j)};
}

std::pair<RunConfig, PressureResult> parse_pressure_document(const std::string& text) {
  const json j = json::parse(text);
  return {run_config_from_json(j.at("config")), pressure_result_from_json(j)};
}

int run_pressure(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.subcommand != "pressure") config_error("not a pressure configuration");
    const auto cavity = cavity_from(parse_material_spec(config.materials[0]),
                                    parse_material_spec(config.materials[1]), *config.d, *config.T,
                                    config.tolerances);
    const auto result = evaluate(cavity, config);
    if (output_format(config) == "json") {
      json doc = to_json(result);
      doc["config"] = to_json(config);
      out << doc.dump(2) << "\n";
      return;
    }
    write_csv_preamble(config, out);
    out << "# pressure_pa = " << number(result.pressure) << "\n";
    out << "# error_estimate_pa = " << number(result.error_estimate) << "\n";
    out << "# n0_te_pa = " << number(result.n0_te) << "\n";
    out << "# n0_tm_pa = " << number(result.n0_tm) << "\n";
    out << "# n_max = " << result.n_max << "\n";
    if (config.method == "realfreq") {
      out << "# evanescent_pa = " << number(result.evanescent) << "\n";
      out << "# propagating_pa = " << number(result.propagating) << "\n";
    }
    out << "n,te_pa,tm_pa\n";
    for (const auto& t : result.per_n) {
      out << t.n << "," << number(t.te) << "," << number(t.tm) << "\n";
    }
  });
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.subcommand != "sweep") config_error("not a sweep configuration");
    const auto& sweep = *config.sweep;
    const auto m1 = parse_material_spec(config.materials[0]);
    const auto m2 = parse_material_spec(config.materials[1]);
    std::optional<std::pair<MaterialModel, MaterialModel>> ref;
    if (!sweep.reference.empty()) {
      ref.emplace(parse_material_spec(sweep.reference[0]), parse_material_spec(sweep.reference[1]));
    }
    if (sweep.param == "omega_p") {
      auto has_wp = [](const MaterialModel& m) {
        return m.kind() == MaterialKind::Drude || m.kind() == MaterialKind::Plasma ||
               m.kind() == MaterialKind::GeneralizedPlasma;
      };
      if (!has_wp(m1) && !has_wp(m2)) config_error("no material has a plasma frequency to sweep");
    }

    const auto values = sweep_values(sweep);
    const auto cavity_at = [&](const MaterialModel& a, const MaterialModel& b, double v) {
      const double d = sweep.param == "d" ? v : *config.d;
      const double T = sweep.param == "T" ? v : *config.T;
      if (sweep.param == "omega_p") {
        return cavity_from(apply_omega_p(a, v), apply_omega_p(b, v), d, T, config.tolerances);
      }
      return cavity_from(a, b, d, T, config.tolerances);
    };
    const auto evaluate_row = [&](double v) {
      SweepRow row;
      row.value = v;
      row.result = evaluate(cavity_at(m1, m2, v), config);
      if (ref) row.reference = evaluate(cavity_at(ref->first, ref->second, v), config).pressure;
      return row;
    };

    // Evaluate concurrently in batches; rows are collected in sweep order.
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t start = 0; start < values.size(); start += workers) {
      std::vector<std::future<SweepRow>> batch;
      const std::size_t stop = std::min(values.size(), start + workers);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(std::async(std::launch::async, evaluate_row, values[i]));
      }
      for (auto& f : batch) rows.push_back(f.get());
    }

    if (output_format(config) == "json") {
      json jrows = json::array();
      for (const auto& row : rows) {
        json jr = {{sweep.param, row.value},
                   {"pressure", row.result.pressure},
                   {"error_estimate", row.result.error_estimate},
                   {"n0_te", row.result.n0_te},
                   {"n0_tm", row.result.n0_tm},
                   {"n_max", row.result.n_max}};
        if (row.reference) {
          jr["reference_pressure"] = *row.reference;
          jr["ratio"] = row.result.pressure / *row.reference;
        }
        jrows.push_back(jr);
      }
      out << json{{"config", to_json(config)}, {"rows", jrows}}.dump(2) << "\n";
      return;
    }
    write_csv_preamble(config, out);
    out << sweep.param << ",pressure_pa,error_estimate_pa,n0_te_pa,n0_tm_pa,n_max";
    if (ref) out << ",reference_pressure_pa,ratio";
    out << "\n";
    for (const auto& row : rows) {
      out << number(row.value) << "," << number(row.result.pressure) << ","
          << number(row.result.error_estimate) << "," << number(row.result.n0_te) << ","
          << number(row.result.n0_tm) << "," << row.result.n_max;
      if (row.reference) {
        out << "," << number(*row.reference) << "," << number(row.result.pressure / *row.reference);
      }
      out << "\n";
    }
  });
}

int run_bvl_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.subcommand != "bvl-check") config_error("not a bvl-check configuration");
    const auto model = parse_material_spec(config.materials[0]);
    const auto report = bvl_verdict(model, *config.d, *config.T, *config.z);
    if (output_format(config) == "json") {
      json doc = to_json(report);
      doc["config"] = to_json(config);
      out << doc.dump(2) << "\n";
      return;
    }
    write_csv_preamble(config, out);
    out << "model_class,b_correlator_norm,e_limit_exponent,cavity_classical_te_pa,"
           "reference_scale,verdict\n";
    out << to_string(report.model_class) << "," << number(report.b_correlator_norm) << ","
        << (std::isinf(report.e_limit_exponent) ? std::string("inf") : number(report.e_limit_exponent))
        << "," << number(report.cavity_classical_te) << "," << number(report.reference_scale) << ","
        << to_string(report.verdict) << "\n";
  });
}

int run_reflect(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (config.subcommand != "reflect") config_error("not a reflect configuration");
    const auto model = parse_material_spec(config.materials[0]);
    const auto& probe = *config.probe;
    std::vector<std::pair<double, ReflectionSet>> rows;
    for (double k : probe.k_perp) {
      if (probe.mode == "static") {
        const auto r = reflection_static(model, k);
        rows.push_back({k, {r.r_te, r.r_tm, r.r_bar}});
      } else if (probe.mode == "xi") {
        rows.push_back({k, reflection(model, complex(0.0, probe.frequency), k)});
      } else {
        rows.push_back({k, reflection(model, complex(probe.frequency, 0.0), k)});
      }
    }
    if (output_format(config) == "json") {
      json jrows = json::array();
      for (const auto& [k, r] : rows) {
        jrows.push_back({{"k_perp", k},
                         {"r_te", {r.r_te.real(), r.r_te.imag()}},
                         {"r_tm", {r.r_tm.real(), r.r_tm.imag()}},
                         {"r_bar", {r.r_bar.real(), r.r_bar.imag()}}});
      }
      out << json{{"config", to_json(config)}, {"rows", jrows}}.dump(2) << "\n";
      return;
    }
    write_csv_preamble(config, out);
    out << "k_perp,re_r_te,im_r_te,re_r_tm,im_r_tm,re_r_bar,im_r_bar\n";
    for (const auto& [k, r] : rows) {
      out << number(k) << "," << number(r.r_te.real()) << "," << number(r.r_te.imag()) << ","
          << number(r.r_tm.real()) << "," << number(r.r_tm.imag()) << ","
          << number(r.r_bar.real()) << "," << number(r.r_bar.imag()) << "\n";
    }
  });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* target = &out;
  if (!config.output.path.empty()) {
    file.open(config.output.path);
    if (!file) {
      err << "ConfigParse: cannot open output file '" << config.output.path << "'\n";
      return kExitConfig;
    }
    target = &file;
  }
  const auto& sc = config.subcommand;
  if (sc == "pressure") return run_pressure(config, *target, err);
  if (sc == "sweep") return run_sweep(config, *target, err);
  if (sc == "bvl-check") return run_bvl_check(config, *target, err);
  if (sc == "reflect") return run_reflect(config, *target, err);
  err << "ConfigParse: unknown subcommand '" << sc << "'\n";
  return kExitConfig;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lifshitz Casimir pressures and Bohr-van Leeuwen checks for planar slabs"};
  app.name("casimir-bvl");
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration (replaces the subcommand flags)");

  std::string mat1, mat2, mat, method = "matsubara", format, out_path, param, kperp, kperp_range;
  std::string ref1, ref2;
  double d = 0, T = 0, z = 0, omega = 0, xi = 0, from = 0, to = 0;
  int points = 0;
  bool log_sweep = false, static_probe = false;
  Tolerances tol;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Output file (default: standard output)");
  };
  const auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--rel-tol", tol.rel_tol, "Matsubara sum relative tolerance");
    sub->add_option("--k-rel-tol", tol.k_rel_tol, "k_perp integral relative tolerance");
    sub->add_option("--rf-rel-tol", tol.rf_rel_tol, "Real-frequency integral relative tolerance");
    sub->add_option("--omega-cap", tol.omega_cap, "Real-frequency cutoff in rad/s (0 = 50 c/(2d))");
    sub->add_option("--method", method, "matsubara or realfreq")
        ->check(CLI::IsMember({"matsubara", "realfreq"}));
  };

  auto* pressure = app.add_subcommand("pressure", "Casimir pressure between two slabs");
  pressure->add_option("--mat1", mat1, "Material of the slab at z <= 0")->required();
  pressure->add_option("--mat2", mat2, "Material of the slab at z >= d")->required();
  auto* p_d = pressure->add_option("--d", d, "Gap width in m");
  auto* p_T = pressure->add_option("--T", T, "Temperature in K");
  add_tolerances(pressure);
  add_common(pressure);

  auto* sweep = app.add_subcommand("sweep", "Pressure over a range of d, T or omega_p");
  sweep->add_option("--mat1", mat1, "Material of the slab at z <= 0")->required();
  sweep->add_option("--mat2", mat2, "Material of the slab at z >= d")->required();
  auto* s_d = sweep->add_option("--d", d, "Gap width in m (unless swept)");
  auto* s_T = sweep->add_option("--T", T, "Temperature in K (unless swept)");
  sweep->add_option("--param", param, "Swept parameter")->required()->check(
      CLI::IsMember({"d", "T", "omega_p"}));
  sweep->add_option("--from", from, "Sweep start")->required();
  sweep->add_option("--to", to, "Sweep end")->required();
  sweep->add_option("--points", points, "Number of sweep points")->required();
  sweep->add_flag("--log", log_sweep, "Logarithmic spacing");
  auto* s_ref1 = sweep->add_option("--ref-mat1", ref1, "Reference cavity, first slab");
  auto* s_ref2 = sweep->add_option("--ref-mat2", ref2, "Reference cavity, second slab");
  add_tolerances(sweep);
  add_common(sweep);

  auto* bvl = app.add_subcommand("bvl-check", "Bohr-van Leeuwen verdict for a material model");
  bvl->add_option("--mat", mat, "Material spec")->required();
  auto* b_d = bvl->add_option("--d", d, "Cavity gap width in m");
  auto* b_T = bvl->add_option("--T", T, "Temperature in K");
  auto* b_z = bvl->add_option("--z", z, "Probe distance from the slab in m");
  add_common(bvl);

  auto* reflect = app.add_subcommand("reflect", "Fresnel coefficients of one material");
  reflect->add_option("--mat", mat, "Material spec")->required();
  auto* r_omega = reflect->add_option("--omega", omega, "Real frequency in rad/s");
  auto* r_xi = reflect->add_option("--xi", xi, "Imaginary frequency in rad/s");
  auto* r_static = reflect->add_flag("--static", static_probe, "Zero-frequency limit");
  r_omega->excludes(r_xi)->excludes(r_static);
  r_xi->excludes(r_static);
  auto* r_k = reflect->add_option("--kperp", kperp, "Comma-separated k_perp values in 1/m");
  auto* r_kr = reflect->add_option("--kperp-range", kperp_range, "from,to,points (log spaced)");
  r_k->excludes(r_kr);
  add_common(reflect);

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ConfigParse: " << e.what() << "\n";
    return kExitConfig;
  }

  RunConfig config;
  int status = guarded(err, [&] {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) config_error("--config replaces the subcommand");
      config = load_run_config(config_path);
      return;
    }
    if (app.get_subcommands().empty()) config_error("a subcommand or --config is required");
    auto* sub = app.get_subcommands().front();
    config.subcommand = sub->get_name();
    config.method = method;
    config.tolerances = tol;
    config.output = {out_path, format};
    if (sub == pressure || sub == sweep) {
      config.materials = {mat1, mat2};
      if ((sub == pressure ? p_d : s_d)->count()) config.d = d;
      if ((sub == pressure ? p_T : s_T)->count()) config.T = T;
    }
    if (sub == sweep) {
      SweepSpec spec{param, from, to, points, log_sweep, {}};
      if (s_ref1->count() || s_ref2->count()) spec.reference = {ref1, ref2};
      config.sweep = spec;
    }
    if (sub == bvl) {
      config.materials = {mat};
      if (b_d->count()) config.d = d;
      if (b_T->count()) config.T = T;
      if (b_z->count()) config.z = z;
    }
    if (sub == reflect) {
      config.materials = {mat};
      ProbeSpec probe;
      if (r_static->count()) {
        probe.mode = "static";
      } else if (r_xi->count()) {
        probe.mode = "xi";
        probe.frequency = xi;
      } else if (r_omega->count()) {
        probe.mode = "omega";
        probe.frequency = omega;
      } else {
        config_error("reflect needs one of --omega, --xi, --static");
      }
      if (r_k->count()) {
        for (const auto& part : split(kperp, ',')) probe.k_perp.push_back(parse_number(part, "--kperp"));
      } else if (r_kr->count()) {
        const auto f = split(kperp_range, ',');
        if (f.size() != 3) config_error("--kperp-range needs from,to,points");
        const double a = parse_number(f[0], "--kperp-range");
        const double b = parse_number(f[1], "--kperp-range");
        const double n = parse_number(f[2], "--kperp-range");
        if (!(a > 0.0 && b > a && n >= 2 && n == std::floor(n))) {
          config_error("--kperp-range needs 0 < from < to and an integer count >= 2");
        }
        for (int i = 0; i < static_cast<int>(n); ++i) {
          probe.k_perp.push_back(a * std::pow(b / a, i / (n - 1.0)));
        }
      }
      config.probe = probe;
    }
    validate(config);
  });
  if (status != kExitOk) return status;
  return run(config, out, err);
}

} // namespace casimir::cli
