#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace casimir {

using RealFunction = std::function<double(double)>;

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct SumResult {
  double value = 0.0;
  long n_max = 0;          // index of the last included term
  double tail_bound = 0.0; // bound on the omitted terms
};

struct PowerLawFit {
  double exponent = 0.0;
  double r_squared = 0.0;
};

struct Sample {
  double x;
  double y;
};

inline constexpr std::size_t kDefaultMaxIntervals = 2000;

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over the union
/// of the panels [breakpoints[i], breakpoints[i+1]]. The endpoints are never
/// evaluated. Converges when the summed error estimate is below
/// max(abs_tol, rel_tol |value|); throws Error{NoConvergence} once
/// max_intervals subintervals have been used.
IntegralResult integrate_panels(const RealFunction& f, std::span<const double> breakpoints,
                                double rel_tol, double abs_tol = 0.0,
                                std::size_t max_intervals = kDefaultMaxIntervals);

IntegralResult integrate_interval(const RealFunction& f, double a, double b, double rel_tol,
                                  double abs_tol = 0.0,
                                  std::size_t max_intervals = kDefaultMaxIntervals);

/// Integral of f over (0, inf) through the map k = scale * t / (1 - t).
/// f should decay at least exponentially beyond ~1/scale.
IntegralResult integrate_semi_infinite(const RealFunction& f, double scale, double rel_tol,
                                       std::size_t max_intervals = kDefaultMaxIntervals,
                                       double abs_tol = 0.0);

/// Heuristic ceiling on the Matsubara index for a gap d (m) at temperature T (K).
long matsubara_ceiling(double d, double temperature, double rel_tol);

/// Sum'_{n>=0} term(n), with the n = 0 term at half weight. Stops once three
/// consecutive terms fall below rel_tol |partial sum| and the geometric tail
/// bound is below the same tolerance.
SumResult matsubara_sum(const std::function<double(long)>& term, double d, double temperature,
                        double rel_tol);

/// Least-squares slope of log y against log x. Requires >= 3 points with x
/// strictly decreasing and all values positive.
PowerLawFit fit_power_law(std::span<const Sample> points);

struct RealFrequencyOptions {
  /// Maximal width of an initial panel above the low-frequency region
  /// (0 = no linear panelling).
  double panel_width = 0.0;
  std::size_t max_intervals = 40000;
  /// Halvings tried while looking for the low-frequency plateau.
  int max_halvings = 200;
};

/// Integral of g over (0, omega_cap). The region (0, omega_min) is replaced by
/// the rectangle g(omega_min) * omega_min, with omega_min lowered until g
/// settles (|g(w) - g(2w)| <= rel_tol |g(2w)|); throws Error{NoPlateau} if it
/// never does.
IntegralResult integrate_real_frequency(const RealFunction& g, double omega_cap, double rel_tol,
                                        const RealFrequencyOptions& options = {});

} // namespace casimir
