#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/fresnel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <array>

using namespace casimir;
using casimir::testing::Generator;

namespace {

constexpr double kWp = 1.37e16;
constexpr double kGamma = 5.32e13;
constexpr double c = kSpeedOfLight;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("branch square root") {
  CHECK(branch_sqrt(complex(4.0, 0.0)) == complex(2.0, 0.0));
  CHECK(branch_sqrt(complex(-4.0, 0.0)) == complex(0.0, 2.0));
  CHECK(branch_sqrt(complex(-4.0, -0.0)) == complex(0.0, 2.0));
  const complex r = branch_sqrt(complex(1.0, -1.0));
  CHECK(r.imag() > 0.0);
  CHECK(std::abs(r * r - complex(1.0, -1.0)) < 1e-15);
}

TEST_CASE("kinematics") {
  SUBCASE("evanescent vacuum wave") {
    const double w = 1e14, k = 2.0 * w / c;
    const auto kin = kinematics(complex(w, 0.0), k, 1.0);
    CHECK(kin.k_z.real() == 0.0);
    CHECK(kin.k_z.imag() == doctest::Approx(std::sqrt(k * k - w * w / (c * c))));
  }
  SUBCASE("imaginary frequency") {
    const double xi = 3e14, k = 1e6;
    const auto kin = kinematics(complex(0.0, xi), k, 4.0);
    CHECK(kin.k_z.real() == 0.0);
    CHECK(kin.k_z.imag() == doctest::Approx(std::sqrt(k * k + xi * xi / (c * c))));
  }
  SUBCASE("zero frequency") {
    const auto kin = kinematics(complex(0.0, 0.0), 5e6, 3.0);
    CHECK(kin.s == complex(0.0, 5e6));
    const auto degenerate = kinematics(complex(0.0, 0.0), 0.0, 3.0);
    CHECK(degenerate.k_z == complex(0.0, 0.0));
    CHECK(degenerate.s == complex(0.0, 0.0));
  }
}

TEST_CASE("ideal metal and vacuum-matched reflection") {
  const auto ideal = reflection(MaterialModel::ideal_metal(), complex(1e14, 0.0), 1e6);
  CHECK(ideal == ReflectionSet{-1.0, 1.0, 1.0});
  const auto vac = MaterialModel::insulator(1.0);
  for (complex w : {complex(1e14, 0), complex(0, 1e14)}) {
    for (double k : {1e3, 1e6, 1e8}) {
      const auto r = reflection(vac, w, k);
      CHECK(std::abs(r.r_te) == 0.0);
      CHECK(std::abs(r.r_tm) == 0.0);
      CHECK(std::abs(r.r_bar) == 0.0);
    }
  }
}

TEST_CASE("plasma TE coefficient on the imaginary axis") {
  const auto plasma = MaterialModel::plasma(kWp);
  for (double xi : {1e12, 1e14, 1e16}) {
    for (double k : {1e5, 1e7, 1e8}) {
      const double q = std::sqrt(k * k + xi * xi / (c * c));
      const double root = std::sqrt(q * q + kWp * kWp / (c * c));
      const double expected = (q - root) / (q + root);
      const auto r = reflection(plasma, complex(0.0, xi), k);
      CHECK(r.r_te.real() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(reflection_imaginary(plasma, xi, k).r_te == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("static limits") {
  const double k = kWp / c;
  CHECK(reflection_static(MaterialModel::drude(kWp, kGamma), 1e6).r_te == 0.0);
  CHECK(reflection_static(MaterialModel::drude(kWp, kGamma), 1e6).r_tm == 1.0);
  CHECK(reflection_static(MaterialModel::plasma(kWp), k).r_te ==
        doctest::Approx((1.0 - std::sqrt(2.0)) / (1.0 + std::sqrt(2.0))).epsilon(1e-14));
  CHECK(reflection_static(MaterialModel::plasma(kWp), k).r_te == doctest::Approx(-0.17157).epsilon(1e-4));
  CHECK(reflection_static(MaterialModel::ideal_metal(), 1e6).r_te == -1.0);
  const auto ins = reflection_static(MaterialModel::insulator(3.0), 1e6);
  CHECK(ins.r_te == 0.0);
  CHECK(ins.r_tm == doctest::Approx(0.5));
  CHECK(ins.r_bar == doctest::Approx(0.5));
  CHECK(kind_of([] { reflection_static(MaterialModel::insulator(3.0), 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { reflection(MaterialModel::insulator(3.0), complex(0, 0), 1.0); }) ==
        ErrorKind::ZeroFrequency);
  CHECK(kind_of([] { reflection(MaterialModel::ideal_metal(), complex(0, 0), 1.0); }) ==
        ErrorKind::ZeroFrequency);
}

TEST_CASE("TM-scalar gap vanishes at zero frequency") {
  std::vector<double> sweep;
  for (double w = 1e13; w >= 1e10; w /= std::sqrt(10.0)) sweep.push_back(w);
  CHECK(tm_scalar_gap(MaterialModel::insulator(3.0), 1e7, sweep) > 0.0);
  CHECK(tm_scalar_gap(MaterialModel::drude(kWp, kGamma), 1e7, sweep) > 0.0);
  CHECK(tm_scalar_gap(MaterialModel::plasma(kWp), 1e7, sweep) > 0.0);
  CHECK(kind_of([&] { tm_scalar_gap(MaterialModel::ideal_metal(), 1e7, sweep); }) ==
        ErrorKind::IdealMetalHasNoEpsilon);
  const std::array<double, 2> short_sweep{1e12, 1e11};
  CHECK(kind_of([&] { tm_scalar_gap(MaterialModel::insulator(3.0), 1e7, short_sweep); }) ==
        ErrorKind::DegenerateSweep);
}

// ---- properties ----

TEST_CASE("property: branch rule") {
  Generator gen(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const double mag = gen.log_uniform(1e10, 1e17);
    const complex w = gen.integer(0, 1) ? complex(mag, 0.0) : complex(0.0, mag);
    const complex eps(gen.uniform(-50.0, 50.0), gen.integer(0, 3) == 0 ? 0.0 : gen.log_uniform(1e-6, 1e3));
    const auto kin = kinematics(w, gen.log_uniform(1e2, 1e9), eps);
    CHECK(kin.k_z.imag() >= 0.0);
    CHECK(kin.s.imag() >= 0.0);
  }
}

TEST_CASE("property: imaginary-axis reflection is real") {
  Generator gen(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = gen.any_model();
    const auto r = reflection(m, complex(0.0, gen.log_uniform(1e9, 1e18)), gen.log_uniform(1e2, 1e9));
    CHECK(std::abs(r.r_te.imag()) < 1e-13);
    CHECK(std::abs(r.r_tm.imag()) < 1e-13);
    CHECK(std::abs(r.r_bar.imag()) < 1e-13);
  }
}

TEST_CASE("property: passivity on the imaginary axis") {
  Generator gen(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = gen.any_model();
    const auto r = reflection_imaginary(m, gen.log_uniform(1e9, 1e18), gen.log_uniform(1e2, 1e9));
    CHECK(r.r_te >= -1.0);
    CHECK(r.r_te <= 0.0);
    CHECK(r.r_tm >= 0.0);
    CHECK(r.r_tm <= 1.0);
  }
}

TEST_CASE("property: static limit matches closed forms") {
  Generator gen(24);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = gen.any_model();
    const double k = gen.log_uniform(1e4, 1e8);
    const auto limit = reflection_static(m, k);
    // Richardson extrapolation of the xi -> 0 sweep, assuming a leading linear term.
    const double xi = 1e-3;
    const auto a = reflection_imaginary(m, xi, k);
    const auto b = reflection_imaginary(m, 2.0 * xi, k);
    const auto extrapolate = [](double at_xi, double at_2xi) { return 2.0 * at_xi - at_2xi; };
    CHECK(std::abs(extrapolate(a.r_te, b.r_te) - limit.r_te) <= 1e-6);
    CHECK(std::abs(extrapolate(a.r_tm, b.r_tm) - limit.r_tm) <= 1e-6);
    CHECK(std::abs(extrapolate(a.r_bar, b.r_bar) - limit.r_bar) <= 1e-6);
  }
}
