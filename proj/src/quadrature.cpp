#include "casimir/quadrature.hpp"

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace casimir {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;     // QUADPACK estimate including the roundoff floor
  double excess;    // error above the roundoff floor
  bool operator<(const Segment& other) const { return excess < other.excess; }
};

Segment gauss_kronrod(const RealFunction& f, double a, double b, std::size_t& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_k = fc * kWgk[7];
  double result_g = fc * kWg[3];
  double result_abs = std::abs(result_k);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    result_k += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) result_g += kWg[j / 2] * sum;
  }
  evaluations += 15;
  const double mean = 0.5 * result_k;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double value = result_k * half;
  result_abs *= std::abs(half);
  result_asc *= std::abs(half);
  double err = std::abs((result_k - result_g) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double floor = 50.0 * eps * result_abs;
  if (!std::isfinite(value) || !std::isfinite(err)) {
    throw Error(ErrorKind::NoConvergence, "integrand is not finite on [" + std::to_string(a) +
                                              ", " + std::to_string(b) + "]");
  }
  return {a, b, value, std::max(err, floor), std::max(0.0, err - floor)};
}

} // namespace

IntegralResult integrate_panels(const RealFunction& f, std::span<const double> breakpoints,
                                double rel_tol, double abs_tol, std::size_t max_intervals) {
  if (breakpoints.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "integration needs at least one panel");
  }
  IntegralResult result;
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  double total_excess = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) {
      throw Error(ErrorKind::InvalidArgument, "integration breakpoints must increase");
    }
    auto seg = gauss_kronrod(f, breakpoints[i], breakpoints[i + 1], result.evaluations);
    total += seg.value;
    total_error += seg.error;
    total_excess += seg.excess;
    heap.push(seg);
  }

  while (true) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_error <= tol || total_excess <= tol) break;
    if (heap.size() >= max_intervals) {
      throw Error(ErrorKind::NoConvergence,
                  "adaptive quadrature exhausted " + std::to_string(max_intervals) +
                      " intervals (estimate " + std::to_string(total) + " +/- " +
                      std::to_string(total_error) + ")");
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break; // interval at machine resolution
    heap.pop();
    auto left = gauss_kronrod(f, worst.a, mid, result.evaluations);
    auto right = gauss_kronrod(f, mid, worst.b, result.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_excess += left.excess + right.excess - worst.excess;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the segments to drop accumulated update roundoff.
  total = 0.0;
  total_error = 0.0;
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : segments) {
    total += s.value;
    total_error += s.error;
  }
  result.value = total;
  result.error_estimate = total_error;
  return result;
}

IntegralResult integrate_interval(const RealFunction& f, double a, double b, double rel_tol,
                                  double abs_tol, std::size_t max_intervals) {
  const std::array<double, 2> panel = {a, b};
  return integrate_panels(f, panel, rel_tol, abs_tol, max_intervals);
}

IntegralResult integrate_semi_infinite(const RealFunction& f, double scale, double rel_tol,
                                       std::size_t max_intervals, double abs_tol) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::InvalidArgument, "semi-infinite integration scale must be positive");
  }
  if (!(rel_tol > 1e-14 && rel_tol < 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "rel_tol must lie in (1e-14, 1e-2)");
  }
  const RealFunction mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double k = scale * t / one_minus;
    const double value = f(k);
    if (value == 0.0) return 0.0;
    return value * scale / (one_minus * one_minus);
  };
  // Split at k = scale and k = 10 scale so the bulk and the tail start resolved.
  const std::array<double, 4> panels = {0.0, 0.5, 10.0 / 11.0, 1.0};
  return integrate_panels(mapped, panels, rel_tol, abs_tol, max_intervals);
}

long matsubara_ceiling(double d, double temperature, double rel_tol) {
  const double xi1 = first_matsubara_frequency(temperature);
  // Terms decay like exp(-2 xi_n d / c); reaching rel_tol takes ~ln(1/rel_tol)
  // e-folds of that envelope.
  const double efolds = std::max(10.0, 1.5 * std::log(1.0 / rel_tol));
  const double n = std::ceil(efolds * kSpeedOfLight / (2.0 * d * xi1));
  return std::max(50L, static_cast<long>(std::min(n, 1e8)));
}

SumResult matsubara_sum(const std::function<double(long)>& term, double d, double temperature,
                        double rel_tol) {
  if (!(d > 0.0) || !(temperature > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Matsubara sum needs d > 0 and T > 0");
  }
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");

  const long ceiling = matsubara_ceiling(d, temperature, rel_tol);
  SumResult result;
  double sum = 0.5 * term(0);
  double previous = std::abs(sum) * 2.0;
  int small_run = 0;
  double tail = std::numeric_limits<double>::infinity();
  long n = 0;
  while (n < ceiling) {
    ++n;
    const double t = term(n);
    sum += t;
    const double at = std::abs(t);
    const bool small = at <= rel_tol * std::abs(sum);
    small_run = small ? small_run + 1 : 0;
    if (at == 0.0 && previous == 0.0) {
      tail = 0.0;
    } else if (previous > 0.0 && at < previous) {
      const double ratio = at / previous;
      tail = at * ratio / (1.0 - ratio);
    } else {
      tail = std::numeric_limits<double>::infinity();
    }
    previous = at;
    if (small_run >= 3 && tail <= rel_tol * std::abs(sum)) break;
    if (small_run >= 3 && sum == 0.0 && tail == 0.0) break;
  }
  result.value = sum;
  result.n_max = n;
  result.tail_bound = tail;
  if (!(tail <= rel_tol * std::abs(sum)) && !(tail == 0.0)) {
    throw Error(ErrorKind::NoConvergence,
                "Matsubara sum reached n = " + std::to_string(n) + " with tail bound " +
                    std::to_string(tail) + " above tolerance");
  }
  return result;
}

PowerLawFit fit_power_law(std::span<const Sample> points) {
  if (points.size() < 3) throw Error(ErrorKind::DegenerateSweep, "power-law fit needs >= 3 points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.x > 0.0) || !(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::NonPositiveData, "power-law fit needs positive finite data");
    }
    if (i > 0 && !(p.x < points[i - 1].x)) {
      throw Error(ErrorKind::DegenerateSweep, "sweep abscissae must be strictly decreasing");
    }
    sx += std::log(p.x);
    sy += std::log(p.y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.x) - mx;
    const double dy = std::log(p.y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (const auto& p : points) {
      const double r = std::log(p.y) - my - fit.exponent * (std::log(p.x) - mx);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

IntegralResult integrate_real_frequency(const RealFunction& g, double omega_cap, double rel_tol,
                                        const RealFrequencyOptions& options) {
  if (!(omega_cap > 0.0) || !std::isfinite(omega_cap)) {
    throw Error(ErrorKind::InvalidArgument, "omega_cap must be positive");
  }
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");

  std::size_t plateau_evaluations = 0;
  double omega_min = omega_cap / 1024.0;
  double g_upper = g(2.0 * omega_min);
  double g_lower = g(omega_min);
  plateau_evaluations += 2;
  int halvings = 0;
  while (std::abs(g_lower - g_upper) > rel_tol * std::abs(g_upper)) {
    if (++halvings > options.max_halvings) {
      throw Error(ErrorKind::NoPlateau, "integrand does not settle as omega -> 0");
    }
    omega_min *= 0.5;
    g_upper = g_lower;
    g_lower = g(omega_min);
    ++plateau_evaluations;
  }

  std::vector<double> breakpoints{omega_min};
  const double log_end = options.panel_width > 0.0 ? std::min(omega_cap, options.panel_width)
                                                   : omega_cap;
  while (breakpoints.back() * 2.0 < log_end) breakpoints.push_back(breakpoints.back() * 2.0);
  breakpoints.push_back(log_end);
  if (options.panel_width > 0.0) {
    while (breakpoints.back() + options.panel_width < omega_cap) {
      breakpoints.push_back(breakpoints.back() + options.panel_width);
    }
    if (breakpoints.back() < omega_cap) breakpoints.push_back(omega_cap);
  }

  auto body = integrate_panels(g, breakpoints, rel_tol, 0.0, options.max_intervals);
  const double plateau = g_lower * omega_min;
  IntegralResult result;
  result.value = body.value + plateau;
  result.error_estimate = body.error_estimate + std::abs(g_lower - g_upper) * omega_min;
  result.evaluations = body.evaluations + plateau_evaluations;
  return result;
}

} // namespace casimir
