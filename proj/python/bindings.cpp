#include "casimir/bvl.hpp"
#include "casimir/cli.hpp"
#include "casimir/error.hpp"
#include "casimir/fresnel.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace casimir;

namespace {

std::vector<double> to_vector(const std::vector<double>& v) { return v; }

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"casimir-bvl"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int status;
  {
    py::gil_scoped_release release;
    status = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return py::make_tuple(status, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lifshitz Casimir pressures and Bohr-van Leeuwen checks for planar slabs";

  static py::exception<Error> casimir_error(m, "CasimirError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object kind = py::str(std::string(error_name(e.kind())));
      PyErr_SetObject(casimir_error.ptr(), py::make_tuple(py::str(e.what()), kind).ptr());
    }
  });

  py::enum_<MaterialKind>(m, "MaterialKind")
      .value("Insulator", MaterialKind::Insulator)
      .value("Drude", MaterialKind::Drude)
      .value("Plasma", MaterialKind::Plasma)
      .value("GeneralizedPlasma", MaterialKind::GeneralizedPlasma)
      .value("IdealMetal", MaterialKind::IdealMetal)
      .value("Tabulated", MaterialKind::Tabulated);
  py::enum_<Extrapolation>(m, "Extrapolation")
      .value("DrudeLike", Extrapolation::DrudeLike)
      .value("PlasmaLike", Extrapolation::PlasmaLike)
      .value("Finite", Extrapolation::Finite);
  py::enum_<ZeroFreqClass>(m, "ZeroFreqClass")
      .value("Finite", ZeroFreqClass::Finite)
      .value("InverseOmega", ZeroFreqClass::InverseOmega)
      .value("InverseOmegaSquared", ZeroFreqClass::InverseOmegaSquared)
      .value("Ideal", ZeroFreqClass::Ideal);
  py::enum_<Polarization>(m, "Polarization").value("TE", Polarization::TE).value("TM", Polarization::TM);
  py::enum_<Verdict>(m, "Verdict").value("Pass", Verdict::Pass).value("Fail", Verdict::Fail);

  py::class_<MaterialModel>(m, "MaterialModel")
      .def_static("insulator",
                  [](double eps0, const std::vector<std::tuple<double, double, double>>& osc) {
                    std::vector<Oscillator> o;
                    for (const auto& [g, w0, gam] : osc) o.push_back({g, w0, gam});
                    return MaterialModel::insulator(eps0, o);
                  },
                  py::arg("eps0"), py::arg("oscillators") = std::vector<std::tuple<double, double, double>>{})
      .def_static("drude", &MaterialModel::drude, py::arg("omega_p"), py::arg("gamma"))
      .def_static("plasma", &MaterialModel::plasma, py::arg("omega_p"))
      .def_static("generalized_plasma",
                  [](double wp, const std::vector<std::tuple<double, double, double>>& osc) {
                    std::vector<Oscillator> o;
                    for (const auto& [g, w0, gam] : osc) o.push_back({g, w0, gam});
                    return MaterialModel::generalized_plasma(wp, o);
                  },
                  py::arg("omega_p"), py::arg("oscillators"))
      .def_static("ideal_metal", &MaterialModel::ideal_metal)
      .def_static("tabulated",
                  [](const std::vector<std::pair<double, double>>& table, Extrapolation extrapolation) {
                    std::vector<TablePoint> t;
                    for (const auto& [xi, eps] : table) t.push_back({xi, eps});
                    return MaterialModel::tabulated(t, extrapolation);
                  },
                  py::arg("table"), py::arg("extrapolation"))
      .def_static("from_spec", &cli::parse_material_spec, py::arg("spec"))
      .def_property_readonly("kind", &MaterialModel::kind)
      .def_property_readonly("eps0", &MaterialModel::eps0)
      .def_property_readonly("omega_p", &MaterialModel::omega_p)
      .def_property_readonly("gamma", &MaterialModel::gamma)
      .def(py::self == py::self)
      .def("__repr__", [](const MaterialModel& mm) { return "<MaterialModel " + to_string(mm.kind()) + ">"; });

  m.def("eval_epsilon", &eval_epsilon, py::arg("model"), py::arg("w"));
  m.def("eval_epsilon_tabulated", &eval_epsilon_tabulated, py::arg("model"), py::arg("xi"));
  m.def("zero_freq_class", &zero_freq_class, py::arg("model"));

  py::class_<ReflectionSet>(m, "ReflectionSet")
      .def_readonly("r_te", &ReflectionSet::r_te)
      .def_readonly("r_tm", &ReflectionSet::r_tm)
      .def_readonly("r_bar", &ReflectionSet::r_bar);
  py::class_<RealReflection>(m, "RealReflection")
      .def_readonly("r_te", &RealReflection::r_te)
      .def_readonly("r_tm", &RealReflection::r_tm)
      .def_readonly("r_bar", &RealReflection::r_bar);
  m.def("reflection", &reflection, py::arg("model"), py::arg("omega"), py::arg("k_perp"));
  m.def("reflection_static", &reflection_static, py::arg("model"), py::arg("k_perp"));
  m.def("tm_scalar_gap",
        [](const MaterialModel& model, double k, const std::vector<double>& sweep) {
          return tm_scalar_gap(model, k, to_vector(sweep));
        },
        py::arg("model"), py::arg("k_perp"), py::arg("omega_sweep"));

  py::class_<CavityConfig>(m, "CavityConfig")
      .def(py::init([](MaterialModel m1, MaterialModel m2, double d, double T, double rel_tol, double k_rel_tol) {
             return CavityConfig{std::move(m1), std::move(m2), d, T, rel_tol, k_rel_tol};
           }),
           py::arg("material_1"), py::arg("material_2"), py::arg("d"), py::arg("T"), py::arg("rel_tol") = 1e-9,
           py::arg("k_rel_tol") = 1e-8)
      .def_readwrite("d", &CavityConfig::d)
      .def_readwrite("T", &CavityConfig::T)
      .def_readwrite("rel_tol", &CavityConfig::rel_tol)
      .def_readwrite("k_rel_tol", &CavityConfig::k_rel_tol);

  py::class_<PressureResult>(m, "PressureResult")
      .def_readonly("pressure", &PressureResult::pressure)
      .def_readonly("error_estimate", &PressureResult::error_estimate)
      .def_readonly("n0_te", &PressureResult::n0_te)
      .def_readonly("n0_tm", &PressureResult::n0_tm)
      .def_readonly("n_max", &PressureResult::n_max)
      .def_readonly("evanescent", &PressureResult::evanescent)
      .def_readonly("propagating", &PressureResult::propagating)
      .def_property_readonly("per_n", [](const PressureResult& r) {
        std::vector<std::tuple<long, double, double>> rows;
        for (const auto& t : r.per_n) rows.emplace_back(t.n, t.te, t.tm);
        return rows;
      });

  m.def("pressure_matsubara", &pressure_matsubara, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("pressure_real_frequency",
        [](const CavityConfig& config, double omega_cap, double rel_tol) {
          RealFrequencyConfig rf;
          rf.omega_cap = omega_cap;
          rf.rel_tol = rel_tol;
          return pressure_real_frequency(config, rf);
        },
        py::arg("config"), py::arg("omega_cap") = 0.0, py::arg("rel_tol") = 5e-2,
        py::call_guard<py::gil_scoped_release>());
  m.def("n0_term", &n0_term, py::arg("config"), py::arg("polarization"));
  m.def("classical_transverse_pressure", &classical_transverse_pressure, py::arg("config"));

  py::class_<StressSplit>(m, "StressSplit")
      .def_readonly("longitudinal", &StressSplit::longitudinal)
      .def_readonly("transverse_scalar", &StressSplit::transverse_scalar)
      .def_readonly("transverse_propagating_te", &StressSplit::transverse_propagating_te)
      .def_readonly("transverse_propagating_tm", &StressSplit::transverse_propagating_tm);
  m.def("stress_split_integrands",
        [](const CavityConfig& c, double w, double k) { return stress_split_integrands(c, w, k); },
        py::arg("config"), py::arg("omega"), py::arg("k_perp"));

  m.def("b_correlator_classical",
        [](const MaterialModel& model, double z, double z_prime) { return b_correlator_classical(model, {z, z_prime}); },
        py::arg("model"), py::arg("z"), py::arg("z_prime"));
  m.def("e_correlator_limit_exponent",
        [](const MaterialModel& model, double k, const std::vector<double>& sweep) {
          return e_correlator_limit_exponent(model, k, to_vector(sweep));
        },
        py::arg("model"), py::arg("k_perp"), py::arg("omega_sweep"));
  m.def("classical_limit_sweep", &classical_limit_sweep, py::arg("k_perp"));

  py::class_<BvLReport>(m, "BvLReport")
      .def_readonly("model_class", &BvLReport::model_class)
      .def_readonly("b_correlator_norm", &BvLReport::b_correlator_norm)
      .def_readonly("e_limit_exponent", &BvLReport::e_limit_exponent)
      .def_readonly("cavity_classical_te", &BvLReport::cavity_classical_te)
      .def_readonly("reference_scale", &BvLReport::reference_scale)
      .def_readonly("verdict", &BvLReport::verdict)
      .def_readonly("b_tensor", &BvLReport::b_tensor);
  m.def("bvl_verdict", &bvl_verdict, py::arg("model"), py::arg("d"), py::arg("T"), py::arg("z_probe"),
        py::arg("threshold") = kBvLThreshold);

  m.def("run_cli", &run_cli, py::arg("args"),
        "Run the command-line front end in-process; returns (exit_status, stdout, stderr).");
}
