#pragma once

#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rydgate/gate.hpp"

namespace rydgate {

struct OptimizeBounds {
  double max_abs_lambda = 2.0 * std::numbers::pi * 1.0;  // rad/ns (1 GHz)
  double min_scale = 0.9;
  double max_scale = 1.1;
};

struct OptimizeOptions {
  OptimizeBounds bounds;
  int max_rounds = 20;
  // Stop when one round lowers the objective by less than this.
  double tolerance = 1e-7;
  double lambda_step = 2.0 * std::numbers::pi * 1e-3;  // initial bracket step (1 MHz)
  double scale_step = 2e-3;
  double lambda_xtol = 2.0 * std::numbers::pi * 1e-5;  // 10 kHz
  double scale_xtol = 1e-6;
  bool free_lambda = true;
  bool free_scales = true;
  GateOptions gate;
};

enum class Coordinate { lambda_target, scale_target, scale_control };
std::string_view to_string(Coordinate c);

struct OptimizationStep {
  int round = 0;
  Coordinate coordinate = Coordinate::lambda_target;
  double lambda_target = 0.0;
  double scale_target = 1.0;
  double scale_control = 1.0;
  double objective = 0.0;
  int evaluations = 0;  // cumulative
};

struct OptimizationResult {
  SequenceSpec spec;
  double initial_objective = 0.0;
  double objective = 0.0;
  int rounds = 0;
  int evaluations = 0;
  bool converged = false;
  bool no_progress = false;
  std::vector<OptimizationStep> trace;
};

// Unitary-model Bell infidelity 1 - F_B, the optimizer's objective.
double bell_infidelity(const SequenceSpec& spec, const PhysicalSetting& setting,
                       const GateOptions& options = {});

// Coordinate descent over (lambda_target, s_target, s_control) with
// golden-section line searches. s_control is shared by both control pulses.
// If the first round does not improve the objective the input spec is
// returned with no_progress set.
OptimizationResult optimize_gate(const SequenceSpec& start, const PhysicalSetting& setting,
                                 const OptimizeOptions& options = {});

struct LineSearchResult {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

// Minimizes f on [lo, hi] starting from x0 (with f(x0) = f0 known): expands a
// bracket from x0 by `step`, then golden-section search down to width xtol.
// Returns the best point seen, never worse than x0.
LineSearchResult golden_line_search(const std::function<double(double)>& f, double x0, double f0,
                                    double step, double lo, double hi, double xtol);

}  // namespace rydgate
