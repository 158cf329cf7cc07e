#include "rydgate/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "rydgate/errors.hpp"

namespace rydgate {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr double kExpand = 1.618033988749895;
constexpr int kMaxBracketSteps = 60;

double get(const SequenceSpec& s, Coordinate c) {
  switch (c) {
    case Coordinate::lambda_target:
      return s.lambda_target;
    case Coordinate::scale_target:
      return s.amp_scales[1];
    case Coordinate::scale_control:
      return s.amp_scales[0];
  }
  return 0.0;
}

void set(SequenceSpec& s, Coordinate c, double v) {
  switch (c) {
    case Coordinate::lambda_target:
      s.lambda_target = v;
      break;
    case Coordinate::scale_target:
      s.amp_scales[1] = v;
      break;
    case Coordinate::scale_control:
      s.amp_scales[0] = v;
      s.amp_scales[2] = v;
      break;
  }
}

}  // namespace

std::string_view to_string(Coordinate c) {
  switch (c) {
    case Coordinate::lambda_target:
      return "lambda_target";
    case Coordinate::scale_target:
      return "scale_target";
    case Coordinate::scale_control:
      return "scale_control";
  }
  return "?";
}

double bell_infidelity(const SequenceSpec& spec, const PhysicalSetting& setting,
                       const GateOptions& options) {
  const GateMetrics m =
      evaluate_gate(spec, setting, Model::unitary, options, {.population_error = false, .bell = true});
  return 1.0 - m.bell_fidelity;
}

LineSearchResult golden_line_search(const std::function<double(double)>& f, double x0, double f0,
                                    double step, double lo, double hi, double xtol) {
  if (!(lo <= x0 && x0 <= hi)) throw ConfigError("line search start outside its bounds");
  if (!(step > 0.0) || !(xtol > 0.0)) throw ConfigError("line search steps must be positive");
  LineSearchResult best{x0, f0, 0};
  auto eval = [&](double x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.f) {
      best.f = v;
      best.x = x;
    }
    return v;
  };

  // Bracket [a, c] around a point b with f(b) below both ends (or at a bound).
  double a = x0, b = x0, c = x0;
  double fb = f0;
  double dir = 1.0;
  double x1 = std::min(hi, x0 + step);
  double f1 = x1 != x0 ? eval(x1) : f0;
  if (!(f1 < f0)) {
    const double xm = std::max(lo, x0 - step);
    const double fm = xm != x0 ? eval(xm) : f0;
    if (!(fm < f0)) {
      a = xm;
      c = x1;
    } else {
      dir = -1.0;
      x1 = xm;
      f1 = fm;
    }
  }
  if (a == c) {
    // Walk downhill in direction dir.
    double prev = x0;
    b = x1;
    fb = f1;
    double width = std::abs(x1 - x0);
    const double bound = dir > 0 ? hi : lo;
    c = bound;
    for (int i = 0; i < kMaxBracketSteps && b != bound; ++i) {
      width *= kExpand;
      const double xn = dir > 0 ? std::min(hi, b + width) : std::max(lo, b - width);
      const double fn = eval(xn);
      if (!(fn < fb)) {
        c = xn;
        break;
      }
      prev = b;
      b = xn;
      fb = fn;
    }
    a = prev;
    if (b == bound) return best;
  }
  if (a > c) std::swap(a, c);

  // Golden section on [a, c].
  double u = c - kGolden * (c - a);
  double v = a + kGolden * (c - a);
  double fu = eval(u);
  double fv = eval(v);
  while (c - a > xtol) {
    if (fu < fv) {
      c = v;
      v = u;
      fv = fu;
      u = c - kGolden * (c - a);
      fu = eval(u);
    } else {
      a = u;
      u = v;
      fu = fv;
      v = a + kGolden * (c - a);
      fv = eval(v);
    }
  }
  return best;
}

OptimizationResult optimize_gate(const SequenceSpec& start, const PhysicalSetting& setting,
                                 const OptimizeOptions& options) {
  const auto& bounds = options.bounds;
  if (!(bounds.max_abs_lambda >= 0.0) || !(bounds.min_scale <= bounds.max_scale)) {
    throw ConfigError("invalid optimizer bounds");
  }
  if (std::abs(start.lambda_target) > bounds.max_abs_lambda ||
      start.amp_scales[1] < bounds.min_scale || start.amp_scales[1] > bounds.max_scale ||
      start.amp_scales[0] < bounds.min_scale || start.amp_scales[0] > bounds.max_scale) {
    throw ConfigError("optimizer start point outside the bounds");
  }

  std::vector<Coordinate> coords;
  if (options.free_lambda) coords.push_back(Coordinate::lambda_target);
  if (options.free_scales) {
    coords.push_back(Coordinate::scale_target);
    coords.push_back(Coordinate::scale_control);
  }

  OptimizationResult result;
  result.spec = start;
  SequenceSpec& spec = result.spec;
  auto objective = [&](const SequenceSpec& s) {
    ++result.evaluations;
    return bell_infidelity(s, setting, options.gate);
  };
  auto record = [&](int round, Coordinate c, double f) {
    result.trace.push_back({round, c, spec.lambda_target, spec.amp_scales[1], spec.amp_scales[0], f,
                            result.evaluations});
  };

  double f = objective(spec);
  result.initial_objective = f;
  result.objective = f;
  if (coords.empty()) return result;

  std::vector<double> steps;
  for (Coordinate c : coords) {
    steps.push_back(c == Coordinate::lambda_target ? options.lambda_step : options.scale_step);
  }

  for (int round = 1; round <= options.max_rounds; ++round) {
    const double f_round = f;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const Coordinate c = coords[k];
      const bool is_lambda = c == Coordinate::lambda_target;
      const double lo = is_lambda ? -bounds.max_abs_lambda : bounds.min_scale;
      const double hi = is_lambda ? bounds.max_abs_lambda : bounds.max_scale;
      const double xtol = is_lambda ? options.lambda_xtol : options.scale_xtol;
      const double x0 = get(spec, c);
      SequenceSpec trial = spec;
      auto line = [&](double x) {
        set(trial, c, x);
        return objective(trial);
      };
      const LineSearchResult ls = golden_line_search(line, x0, f, steps[k], lo, hi, xtol);
      set(spec, c, ls.x);
      f = ls.f;
      const double moved = std::abs(ls.x - x0);
      const double initial = is_lambda ? options.lambda_step : options.scale_step;
      steps[k] = std::clamp(2.0 * moved, 4.0 * xtol, initial);
      record(round, c, f);
    }
    result.rounds = round;
    if (round == 1 && !(f < result.initial_objective)) {
      result.spec = start;
      result.objective = result.initial_objective;
      result.no_progress = true;
      return result;
    }
    if (f_round - f < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.objective = f;
  return result;
}

}  // namespace rydgate
