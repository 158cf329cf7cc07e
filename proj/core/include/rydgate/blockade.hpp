#pragma once

#include <utility>
#include <vector>

#include "rydgate/params.hpp"

namespace rydgate {

// Relative leakage model. Detunings are averages of magnitudes:
// delta1 = (|Delta+| + |Delta-|) / 2,
// delta2 = (|Delta'_1/2| + |Delta'_3/2| + |Delta''_1/2| + |Delta''_3/2|) / 4.
struct LeakModel {
  int n = 0;
  int n_prime = 0;
  int n_dprime = 0;
  double delta1 = 0.0;  // rad/ns
  double delta2 = 0.0;  // rad/ns

  static LeakModel from_setting(const PhysicalSetting& setting);
};

// P(B) = 1/((n+1)^3 (d1+B)^2) + 1/((n-1)^3 (d1-B)^2) + 1/(n'^3 (d2-B)^2)
//      + 1/(n''^3 (d2+B)^2) + 1/(n^3 B^2), in arbitrary units.
// Throws ConfigError for b0 <= 0 or at a resonance b0 = delta1, delta2.
double leak_probability(const LeakModel& model, double b0);
double leak_probability_derivative(const LeakModel& model, double b0);

// Default search interval (0.01, 0.99) * min(delta1, delta2).
std::pair<double, double> default_bracket(const LeakModel& model);

struct FlatRegion {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct OptimalBlockade {
  double b0 = 0.0;  // rad/ns
  double p_min = 0.0;
  // Region around b0 with P <= 1.1 P(b0), clipped to the bracket.
  FlatRegion flat;
};

// Interior minimizer by bisection on the analytic derivative, cross-checked
// against a 200-point scan. Throws NumericalError if the derivative does not
// change sign in the bracket or the scan finds a lower value.
OptimalBlockade optimal_blockade(const LeakModel& model, std::pair<double, double> bracket);
OptimalBlockade optimal_blockade(const LeakModel& model);

struct LeakSample {
  double b0;  // rad/ns
  double p;
};

// Evenly spaced samples on [lo, hi]; points at a resonance are skipped.
std::vector<LeakSample> scan_leak_probability(const LeakModel& model, double lo, double hi,
                                              int points);

}  // namespace rydgate
