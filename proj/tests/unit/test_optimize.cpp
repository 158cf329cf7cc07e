#include <gtest/gtest.h>

#include <cmath>

#include "rydgate/errors.hpp"
#include "rydgate/optimize.hpp"
#include "rydgate/params.hpp"

using namespace rydgate;

TEST(Optimize, CoordinateNames) {
  EXPECT_EQ(to_string(Coordinate::lambda_target), "lambda_target");
  EXPECT_EQ(to_string(Coordinate::scale_control), "scale_control");
}

TEST(Optimize, GoldenSearchParabola) {
  int calls = 0;
  auto f = [&](double x) {
    ++calls;
    return (x - 1.3) * (x - 1.3) + 0.5;
  };
  const auto r = golden_line_search(f, 0.0, f(0.0), 0.1, -10.0, 10.0, 1e-8);
  EXPECT_NEAR(r.x, 1.3, 1e-7);
  EXPECT_NEAR(r.f, 0.5, 1e-12);
  EXPECT_EQ(r.evaluations, calls - 1);
}

TEST(Optimize, GoldenSearchStopsAtBound) {
  auto f = [](double x) { return -x; };
  const auto r = golden_line_search(f, 0.0, 0.0, 0.1, -1.0, 2.0, 1e-9);
  EXPECT_NEAR(r.x, 2.0, 1e-8);
}

TEST(Optimize, GoldenSearchNeverWorse) {
  auto f = [](double x) { return std::abs(x) < 1e-3 ? 0.0 : 1.0 + std::sin(40 * x); };
  const auto r = golden_line_search(f, 0.0, 0.0, 0.5, -3.0, 3.0, 1e-6);
  EXPECT_LE(r.f, 0.0);
}

TEST(Optimize, RejectsStartOutsideBounds) {
  const auto s = load_setting("S1");
  auto spec = SequenceSpec::make(30.0, 0.5, PulseKind::drag);
  spec.amp_scales = {1.2, 1.0, 1.2};
  EXPECT_THROW(optimize_gate(spec, s), ConfigError);
}

TEST(Optimize, FrozenCoordinatesReturnStart) {
  const auto s = load_setting("S1");
  const auto spec = SequenceSpec::make(30.0, 0.5, PulseKind::drag);
  OptimizeOptions opts;
  opts.free_lambda = false;
  opts.free_scales = false;
  const auto r = optimize_gate(spec, s, opts);
  EXPECT_EQ(r.objective, r.initial_objective);
  EXPECT_EQ(r.spec.lambda_target, 0.0);
}

TEST(Optimize, ImprovesBellInfidelity) {
  const auto s = load_setting("S1");
  const auto spec = SequenceSpec::make(50.0, 0.5, PulseKind::drag);
  const auto r = optimize_gate(spec, s);
  EXPECT_NEAR(r.initial_objective, bell_infidelity(spec, s), 1e-15);
  EXPECT_LT(r.objective, 1e-2 * r.initial_objective);
  EXPECT_LT(r.objective, 1e-6);
  EXPECT_FALSE(r.no_progress);
  EXPECT_GT(r.spec.lambda_target, 0.0);
  EXPECT_EQ(r.spec.amp_scales[0], r.spec.amp_scales[2]);
  EXPECT_NEAR(bell_infidelity(r.spec, s), r.objective, 1e-15);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LE(r.trace[i].objective, r.trace[i - 1].objective);
    EXPECT_GE(r.trace[i].evaluations, r.trace[i - 1].evaluations);
  }
  EXPECT_EQ(r.trace.back().evaluations, r.evaluations);
}
