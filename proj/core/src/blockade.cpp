#include "rydgate/blockade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rydgate/errors.hpp"
#include "rydgate/units.hpp"

namespace rydgate {

namespace {

constexpr int kScanPoints = 200;
constexpr double kFlatFactor = 1.1;

double cube(int n) { return static_cast<double>(n) * n * n; }

void check_point(const LeakModel& m, double b0) {
  if (!(b0 > 0.0) || !std::isfinite(b0)) throw ConfigError("blockade shift must be positive");
  const auto resonant = [&](double d) { return std::abs(b0 - d) <= 1e-12 * d; };
  if (resonant(m.delta1)) {
    throw ConfigError("blockade shift is resonant with the n+-1 leakage transition (delta1)");
  }
  if (resonant(m.delta2)) {
    throw ConfigError("blockade shift is resonant with the n', n'' leakage transitions (delta2)");
  }
}

// Bisection for g(x) = 0 on [a, b] with g(a) and g(b) of opposite sign.
template <class G>
double bisect(G g, double a, double b) {
  double ga = g(a);
  for (int i = 0; i < 200 && b - a > 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b); ++i) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LeakModel LeakModel::from_setting(const PhysicalSetting& s) {
  LeakModel m;
  m.n = s.n;
  m.n_prime = s.n_prime;
  m.n_dprime = s.n_dprime;
  m.delta1 = 0.5 * (std::abs(s.delta_plus) + std::abs(s.delta_minus));
  m.delta2 = 0.25 * (std::abs(s.delta_p1_half) + std::abs(s.delta_p3_half) + std::abs(s.delta_pp1_half) +
                     std::abs(s.delta_pp3_half));
  return m;
}

double leak_probability(const LeakModel& m, double b) {
  check_point(m, b);
  const auto sq = [](double x) { return x * x; };
  return 1.0 / (cube(m.n + 1) * sq(m.delta1 + b)) + 1.0 / (cube(m.n - 1) * sq(m.delta1 - b)) +
         1.0 / (cube(m.n_prime) * sq(m.delta2 - b)) + 1.0 / (cube(m.n_dprime) * sq(m.delta2 + b)) +
         1.0 / (cube(m.n) * sq(b));
}

double leak_probability_derivative(const LeakModel& m, double b) {
  check_point(m, b);
  const auto cb = [](double x) { return x * x * x; };
  return -2.0 / (cube(m.n + 1) * cb(m.delta1 + b)) + 2.0 / (cube(m.n - 1) * cb(m.delta1 - b)) +
         2.0 / (cube(m.n_prime) * cb(m.delta2 - b)) - 2.0 / (cube(m.n_dprime) * cb(m.delta2 + b)) -
         2.0 / (cube(m.n) * cb(b));
}

std::pair<double, double> default_bracket(const LeakModel& m) {
  const double d = std::min(m.delta1, m.delta2);
  return {0.01 * d, 0.99 * d};
}

OptimalBlockade optimal_blockade(const LeakModel& m) { return optimal_blockade(m, default_bracket(m)); }

OptimalBlockade optimal_blockade(const LeakModel& m, std::pair<double, double> bracket) {
  const auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo) || !(hi < std::min(m.delta1, m.delta2))) {
    throw ConfigError("blockade bracket must lie inside (0, min(delta1, delta2))");
  }
  const auto scan = scan_leak_probability(m, lo, hi, kScanPoints);
  const auto scan_min = std::min_element(scan.begin(), scan.end(),
                                         [](const LeakSample& a, const LeakSample& b) { return a.p < b.p; });
  const double dlo = leak_probability_derivative(m, lo);
  const double dhi = leak_probability_derivative(m, hi);
  if (!(dlo < 0.0 && dhi > 0.0)) {
    std::ostringstream msg;
    msg << "dP/dB does not change sign on [" << angular_to_ghz(lo) << ", " << angular_to_ghz(hi)
        << "] GHz (dP/dB = " << dlo << ", " << dhi << "); scan minimum at "
        << angular_to_ghz(scan_min->b0) << " GHz";
    throw NumericalError(msg.str());
  }
  OptimalBlockade out;
  out.b0 = bisect([&](double b) { return leak_probability_derivative(m, b); }, lo, hi);
  out.p_min = leak_probability(m, out.b0);
  if (scan_min->p < out.p_min * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "derivative root at " << angular_to_ghz(out.b0) << " GHz is not the global minimum; scan finds "
        << angular_to_ghz(scan_min->b0) << " GHz";
    throw NumericalError(msg.str());
  }
  const double level = kFlatFactor * out.p_min;
  const auto excess = [&](double b) { return leak_probability(m, b) - level; };
  out.flat.lo = excess(lo) > 0.0 ? bisect(excess, lo, out.b0) : lo;
  out.flat.hi = excess(hi) > 0.0 ? bisect(excess, out.b0, hi) : hi;
  return out;
}

std::vector<LeakSample> scan_leak_probability(const LeakModel& m, double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw ConfigError("scan needs at least two points on a non-empty range");
  std::vector<LeakSample> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double b = lo + (hi - lo) * i / (points - 1);
    try {
      out.push_back({b, leak_probability(m, b)});
    } catch (const ConfigError&) {
      // resonance or non-positive shift
    }
  }
  return out;
}

}  // namespace rydgate
