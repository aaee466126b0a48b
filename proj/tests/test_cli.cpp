#include "casimir/cli.hpp"
#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace casimir;
using namespace casimir::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "casimir-bvl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

// Data rows of a CSV report (comment block and header stripped).
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string csv_comment(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  const std::string prefix = "# " + key + " = ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return "";
}

const char* kDrude = "drude:1.37e16,5.32e13";

} // namespace

TEST_CASE("material spec grammar") {
  CHECK(parse_material_spec("ideal") == MaterialModel::ideal_metal());
  CHECK(parse_material_spec("insulator:3") == MaterialModel::insulator(3.0));
  CHECK(parse_material_spec("insulator:2;1e30,5e15,1e14") == MaterialModel::insulator(2.0, {{1e30, 5e15, 1e14}}));
  CHECK(parse_material_spec(kDrude) == MaterialModel::drude(1.37e16, 5.32e13));
  CHECK(parse_material_spec("plasma:1.37e16") == MaterialModel::plasma(1.37e16));
  CHECK(parse_material_spec("gplasma:1.37e16;1e30,5e15,1e14;2e30,8e15,1e14") ==
        MaterialModel::generalized_plasma(1.37e16, {{1e30, 5e15, 1e14}, {2e30, 8e15, 1e14}}));
  for (const char* bad : {"", "drude:1e16", "plasma", "plasma:abc", "ideal:1", "metal:1", "gplasma:1e16;1,2",
                          "table:nofile.txt,Finite", "table:x", "insulator:3;1,2,3,4"}) {
    CAPTURE(bad);
    try {
      parse_material_spec(bad);
      FAIL("expected ConfigParse");
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::ConfigParse || e.kind() == ErrorKind::InvalidModel));
    }
  }
}

TEST_CASE("table material spec") {
  const std::string path = "cli_test_table.txt";
  {
    std::ofstream out(path);
    out << "# xi eps\n1e13 40\n1e14 5\n1e15 1.5\n";
  }
  const auto m = parse_material_spec("table:" + path + ",DrudeLike");
  CHECK(m.kind() == MaterialKind::Tabulated);
  CHECK(m.extrapolation() == Extrapolation::DrudeLike);
  std::remove(path.c_str());
}

TEST_CASE("pressure subcommand") {
  const auto ideal = invoke({"pressure", "--mat1", "ideal", "--mat2", "ideal", "--d", "1e-6", "--T", "1",
                             "--method", "matsubara"});
  REQUIRE(ideal.status == kExitOk);
  const double p = std::stod(csv_comment(ideal.out, "pressure_pa"));
  CHECK(p == doctest::Approx(-1.2963e-3).epsilon(5e-3));
  CHECK(!csv_rows(ideal.out).empty());

  const auto drude = invoke({"pressure", "--mat1", kDrude, "--mat2", kDrude, "--d", "1e-6", "--T", "300",
                             "--format", "json"});
  REQUIRE(drude.status == kExitOk);
  const auto j = nlohmann::json::parse(drude.out);
  CHECK(j.at("n0_te").get<double>() == 0.0);
  CHECK(j.at("per_n").size() == j.at("n_max").get<std::size_t>() + 1);

  const auto bad = invoke({"pressure", "--mat1", "drude:1e16", "--mat2", "ideal", "--d", "1e-6", "--T", "300"});
  CHECK(bad.status == kExitConfig);
  CHECK(bad.err.find("ConfigParse") != std::string::npos);
}

TEST_CASE("error reporting maps kinds to exit statuses") {
  const auto status = [](const std::exception& e, std::string& text) {
    std::ostringstream err;
    const int code = report_error(e, err);
    text = err.str();
    return code;
  };
  std::string text;
  CHECK(status(Error(ErrorKind::NoConvergence, "budget"), text) == kExitNumerical);
  CHECK(text == "NoConvergence: budget\n");
  CHECK(status(Error(ErrorKind::NoPlateau, "x"), text) == kExitNumerical);
  CHECK(text.rfind("NoPlateau", 0) == 0);
  CHECK(status(Error(ErrorKind::ConfigParse, "x"), text) == kExitConfig);
  CHECK(status(Error(ErrorKind::InvalidModel, "x"), text) == kExitConfig);
  CHECK(status(Error(ErrorKind::UnsupportedModel, "x"), text) == kExitConfig);

  // Lossless plasma is outside the real-frequency contract: a configuration error.
  RunConfig config;
  config.subcommand = "pressure";
  config.materials = {"insulator:3", "plasma:1e16"};
  config.d = 1e-6;
  config.T = 300.0;
  config.method = "realfreq";
  std::ostringstream out, err;
  CHECK(run(config, out, err) == kExitConfig);
  CHECK(err.str().rfind("UnsupportedModel", 0) == 0);
}

TEST_CASE("sweep subcommand") {
  const auto two = invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--T", "300", "--param", "d", "--from",
                           "1e-6", "--to", "2e-6", "--points", "2"});
  REQUIRE(two.status == kExitOk);
  CHECK(csv_rows(two.out).size() == 2);

  const auto temps = invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--d", "20e-6", "--param", "T",
                             "--from", "10", "--to", "1000", "--points", "6", "--log"});
  REQUIRE(temps.status == kExitOk);
  const auto rows = csv_rows(temps.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
    CHECK(std::abs(std::stod(rows[i][1])) > std::abs(std::stod(rows[i - 1][1])));
  }

  const auto ratio = invoke({"sweep", "--mat1", kDrude, "--mat2", kDrude, "--ref-mat1", "plasma:1.37e16",
                             "--ref-mat2", "plasma:1.37e16", "--T", "300", "--param", "d", "--from", "5e-7",
                             "--to", "1e-5", "--points", "5", "--log"});
  REQUIRE(ratio.status == kExitOk);
  const auto rr = csv_rows(ratio.out);
  REQUIRE(rr.size() == 5);
  CHECK(std::stod(rr.back().back()) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(std::stod(rr.back().back()) < std::stod(rr.front().back()));

  CHECK(invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--T", "300", "--param", "d", "--from", "2e-6",
                "--to", "1e-6", "--points", "3"}).status == kExitConfig);
  CHECK(invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--T", "300", "--param", "d", "--from", "1e-6",
                "--to", "2e-6", "--points", "1"}).status == kExitConfig);
  CHECK(invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--T", "300", "--d", "1e-6", "--param", "d",
                "--from", "1e-6", "--to", "2e-6", "--points", "3"}).status == kExitConfig);
  CHECK(invoke({"sweep", "--mat1", "ideal", "--mat2", "ideal", "--T", "300", "--d", "1e-6", "--param",
                "omega_p", "--from", "1e15", "--to", "2e15", "--points", "3"}).status == kExitConfig);
}

TEST_CASE("omega_p sweep rebuilds free-carrier models") {
  const auto r = invoke({"sweep", "--mat1", "plasma:1e15", "--mat2", "plasma:1e15", "--d", "5e-6", "--T", "300",
                         "--param", "omega_p", "--from", "1e15", "--to", "1e18", "--points", "4", "--log"});
  REQUIRE(r.status == kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::stod(rows[0][0]) == doctest::Approx(1e15));
  CHECK(std::stod(rows[3][0]) == doctest::Approx(1e18));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][1])) > std::abs(std::stod(rows[i - 1][1])));
  }
}

TEST_CASE("bvl-check subcommand") {
  const auto plasma = invoke({"bvl-check", "--mat", "plasma:1.37e16", "--d", "1e-6", "--T", "300", "--z", "1e-7"});
  REQUIRE(plasma.status == kExitOk);
  const auto j = nlohmann::json::parse(plasma.out);
  CHECK(j.at("verdict") == "Fail");
  for (const char* key : {"model_class", "b_correlator_norm", "e_limit_exponent", "cavity_classical_te_pa",
                          "reference_scale", "verdict"}) {
    CHECK(j.contains(key));
  }

  const auto ins = invoke({"bvl-check", "--mat", "insulator:3.0", "--d", "1e-6", "--T", "300", "--z", "1e-7"});
  REQUIRE(ins.status == kExitOk);
  CHECK(nlohmann::json::parse(ins.out).at("verdict") == "Pass");

  const auto missing = invoke({"bvl-check", "--mat", "insulator:3.0", "--d", "1e-6", "--T", "300"});
  CHECK(missing.status == kExitConfig);
  CHECK(missing.err.find("ConfigParse") != std::string::npos);
}

TEST_CASE("reflect subcommand") {
  const auto ideal = invoke({"reflect", "--mat", "ideal", "--static", "--kperp", "1e6"});
  REQUIRE(ideal.status == kExitOk);
  const auto rows = csv_rows(ideal.out);
  REQUIRE(rows.size() == 1);
  const std::vector<double> expected{-1, 0, 1, 0, 1, 0};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::stod(rows[0][i + 1]) == expected[i]);

  const double k = 1.37e16 / kSpeedOfLight;
  const auto plasma = invoke({"reflect", "--mat", "plasma:1.37e16", "--static", "--kperp", std::to_string(k)});
  REQUIRE(plasma.status == kExitOk);
  CHECK(std::stod(csv_rows(plasma.out)[0][1]) == doctest::Approx(-0.17157).epsilon(1e-4));

  const auto drude = invoke({"reflect", "--mat", kDrude, "--xi", "1e14", "--kperp-range", "1e5,1e8,4"});
  REQUIRE(drude.status == kExitOk);
  const auto dr = csv_rows(drude.out);
  REQUIRE(dr.size() == 4);
  for (const auto& row : dr) {
    CHECK(std::stod(row[2]) == 0.0);
    CHECK(std::stod(row[4]) == 0.0);
    CHECK(std::stod(row[6]) == 0.0);
  }

  CHECK(invoke({"reflect", "--mat", "ideal", "--kperp", "1e6"}).status == kExitConfig);
  CHECK(invoke({"reflect", "--mat", "ideal", "--static"}).status == kExitConfig);
  CHECK(invoke({"reflect", "--mat", "ideal", "--static", "--xi", "1e14", "--kperp", "1e6"}).status == kExitConfig);
}

TEST_CASE("JSON configuration files") {
  const std::string path = "cli_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"subcommand": "bvl-check", "materials": ["drude:1.37e16,5.32e13"], "d": 1e-6, "T": 300,
               "z": 1e-7, "output": {"format": "csv"}})";
  }
  const auto ok = invoke({"--config", path});
  CHECK(ok.status == kExitOk);
  CHECK(ok.out.find(",Pass") != std::string::npos);
  {
    std::ofstream out(path);
    out << R"({"subcommand": "pressure", "materials": ["ideal", "ideal"], "d": 1e-6, "T": 300, "colour": 1})";
  }
  CHECK(invoke({"--config", path}).status == kExitConfig);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK(invoke({"--config", path}).status == kExitConfig);
  std::remove(path.c_str());
  CHECK(invoke({"--config", "missing.json"}).status == kExitConfig);
  CHECK(invoke({}).status == kExitConfig);
}

TEST_CASE("output files") {
  const std::string path = "cli_test_output.csv";
  const auto r = invoke({"pressure", "--mat1", "ideal", "--mat2", "ideal", "--d", "1e-6", "--T", "300", "--out", path});
  CHECK(r.status == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# casimir-bvl pressure");
  in.close();
  std::remove(path.c_str());
}

// ---- properties ----

TEST_CASE("property: JSON reports round-trip") {
  casimir::testing::Generator gen(61);
  const std::vector<std::string> specs{"ideal", "insulator:3.0", kDrude, "plasma:1.37e16",
                                       "gplasma:1.37e16;1e30,5e15,1e14"};
  for (int trial = 0; trial < 10; ++trial) {
    const std::string mat = specs[static_cast<std::size_t>(gen.integer(0, 4))];
    RunConfig config;
    config.subcommand = "bvl-check";
    config.materials = {mat};
    config.d = gen.log_uniform(1e-7, 1e-5);
    config.T = gen.log_uniform(1.0, 1000.0);
    config.z = gen.log_uniform(1e-8, 1e-6);
    config.output.format = "json";
    std::ostringstream out, err;
    REQUIRE(run(config, out, err) == kExitOk);
    const auto [parsed_config, report] = parse_bvl_document(out.str());
    CHECK(parsed_config == config);
    CHECK(report == bvl_verdict(parse_material_spec(mat), *config.d, *config.T, *config.z));
  }
  for (int trial = 0; trial < 10; ++trial) {
    RunConfig config;
    config.subcommand = "pressure";
    config.materials = {specs[static_cast<std::size_t>(gen.integer(0, 4))],
                        specs[static_cast<std::size_t>(gen.integer(0, 4))]};
    config.d = gen.log_uniform(1e-7, 1e-5);
    config.T = gen.log_uniform(10.0, 1000.0);
    config.tolerances.rel_tol = 1e-7;
    config.output.format = "json";
    std::ostringstream out, err;
    REQUIRE(run(config, out, err) == kExitOk);
    const auto [parsed_config, result] = parse_pressure_document(out.str());
    CHECK(parsed_config == config);
    const auto fresh = pressure_matsubara([&] {
      CavityConfig c;
      c.material_1 = parse_material_spec(config.materials[0]);
      c.material_2 = parse_material_spec(config.materials[1]);
      c.d = *config.d;
      c.T = *config.T;
      c.rel_tol = config.tolerances.rel_tol;
      c.k_rel_tol = config.tolerances.k_rel_tol;
      return c;
    }());
    CHECK(result.pressure == fresh.pressure);
    CHECK(result.n_max == fresh.n_max);
    CHECK(result.per_n.size() == fresh.per_n.size());
  }
}

TEST_CASE("property: configurations round-trip through JSON") {
  casimir::testing::Generator gen(62);
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig config;
    config.subcommand = "sweep";
    config.materials = {"ideal", kDrude};
    config.method = gen.integer(0, 1) ? "matsubara" : "realfreq";
    config.tolerances.rel_tol = gen.log_uniform(1e-12, 1e-4);
    config.tolerances.omega_cap = gen.log_uniform(1e14, 1e17);
    const double from = gen.log_uniform(1e-7, 1e-5);
    config.sweep = SweepSpec{"d", from, from * gen.uniform(1.1, 100.0), gen.integer(2, 50), gen.integer(0, 1) == 1, {}};
    config.T = gen.uniform(1.0, 1000.0);
    config.output = {"", gen.integer(0, 1) ? "csv" : "json"};
    CHECK(run_config_from_json(nlohmann::json::parse(to_json(config).dump())) == config);
  }
}

TEST_CASE("property: CSV output is deterministic") {
  const std::vector<std::string> args{"sweep", "--mat1", kDrude, "--mat2", "plasma:1e16", "--T", "300", "--param",
                                      "d", "--from", "2e-7", "--to", "5e-6", "--points", "12", "--log"};
  const auto first = invoke(args);
  REQUIRE(first.status == kExitOk);
  for (int run_index = 0; run_index < 3; ++run_index) CHECK(invoke(args).out == first.out);
}
