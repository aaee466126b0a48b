#pragma once

// Shared oracles and property generators for the test suites. Everything here is
// deliberately independent of the library's quadrature and summation code.

#include "casimir/constants.hpp"
#include "casimir/materials.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace casimir::testing {

// Trapezoid rule on a log-spaced grid over [lo, hi]; the integrand must be negligible
// outside that window.
inline double log_trapezoid(const std::function<double(double)>& f, double lo, double hi,
                            int points = 100000) {
  const double step = std::log(hi / lo) / (points - 1);
  double sum = 0.0;
  double prev_x = lo;
  double prev_y = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo * std::exp(step * i);
    const double y = f(x);
    sum += 0.5 * (x - prev_x) * (y + prev_y);
    prev_x = x;
    prev_y = y;
  }
  return sum;
}

// zeta(3) from its defining series with an Euler-Maclaurin tail.
inline double zeta3_series() {
  double sum = 0.0;
  const int n_terms = 2000;
  for (int n = n_terms; n >= 1; --n) sum += 1.0 / (double(n) * n * n);
  const double N = n_terms;
  return sum + 1.0 / (2.0 * N * N) - 1.0 / (2.0 * N * N * N) + 1.0 / (4.0 * N * N * N * N);
}

inline double ideal_metal_zero_temperature(double d) {
  return -kPi * kPi * kHbar * kSpeedOfLight / (240.0 * std::pow(d, 4));
}

// Fixed-seed generator for property tests.
class Generator {
public:
  explicit Generator(unsigned seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  std::vector<Oscillator> oscillators(int max_count) {
    std::vector<Oscillator> out(static_cast<std::size_t>(integer(0, max_count)));
    for (auto& o : out) {
      o.center = log_uniform(1e14, 1e16);
      o.strength = uniform(0.1, 5.0) * o.center * o.center;
      o.width = uniform(0.01, 0.3) * o.center;
    }
    return out;
  }

  // Any closed-form (non-tabulated, non-ideal) model with physically plausible parameters.
  MaterialModel closed_form_model() {
    const double wp = log_uniform(1e14, 3e16);
    switch (integer(0, 3)) {
    case 0: return MaterialModel::insulator(uniform(1.0, 20.0), oscillators(2));
    case 1: return MaterialModel::drude(wp, wp * log_uniform(1e-4, 1e-1));
    case 2: return MaterialModel::plasma(wp);
    default: {
      auto osc = oscillators(2);
      if (osc.empty()) osc.push_back({1e30, 5e15, 1e14});
      return MaterialModel::generalized_plasma(wp, osc);
    }
    }
  }

  MaterialModel any_model() {
    if (integer(0, 5) == 0) return MaterialModel::ideal_metal();
    return closed_form_model();
  }

private:
  std::mt19937_64 engine_;
};

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace casimir::testing
