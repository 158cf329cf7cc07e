#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "rydgate/errors.hpp"
#include "rydgate/ode.hpp"

using namespace rydgate;

namespace {

const std::complex<double> kI{0.0, 1.0};

// Resonant two-level system i psi' = (Omega/2) sigma_x psi.
OdeRhs rabi(double omega) {
  return [omega](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy(0) = -kI * 0.5 * omega * y(1);
    dy(1) = -kI * 0.5 * omega * y(0);
  };
}

Eigen::VectorXcd ground() {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(2);
  y(0) = 1.0;
  return y;
}

}  // namespace

TEST(Ode, RabiOracle) {
  const double omega = 2.0 * std::numbers::pi * 0.05;
  Dop853 ode;
  Eigen::VectorXcd y = ground();
  double t = 0.0;
  for (double t1 : {3.3, 10.0, 17.1, 40.0, 100.0}) {
    ode.integrate(rabi(omega), t, t1, y);
    t = t1;
    const double s = std::sin(0.5 * omega * t);
    EXPECT_LT(std::abs(std::norm(y(1)) - s * s), 1e-8) << "t=" << t;
    EXPECT_LT(std::abs(y.squaredNorm() - 1.0), 1e-9);
  }
  EXPECT_GT(ode.stats().accepted, 0);
  EXPECT_GE(ode.stats().rhs_evals, 12 * ode.stats().accepted);
}

TEST(Ode, ComplexExponential) {
  const std::complex<double> lambda{-0.3, 2.0};
  OdeRhs f = [lambda](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { dy = lambda * y; };
  Dop853 ode;
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
  ode.integrate(f, 0.0, 5.0, y);
  EXPECT_LT(std::abs(y(0) - std::exp(lambda * 5.0)), 1e-9);
}

TEST(Ode, TimeDependentRhs) {
  // y' = i cos(t) y  ->  y = exp(i sin t)
  OdeRhs f = [](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy = kI * std::cos(t) * y;
  };
  Dop853 ode;
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
  ode.integrate(f, 0.0, 7.0, y);
  EXPECT_LT(std::abs(y(0) - std::exp(kI * std::sin(7.0))), 1e-9);
}

TEST(Ode, FixedStepConvergesAtEighthOrder) {
  const double omega = 1.0;
  auto error = [&](long n) {
    Dop853 ode;
    Eigen::VectorXcd y = ground();
    ode.integrate_fixed(rabi(omega), 0.0, 20.0, y, n);
    return std::abs(y(1) - (-kI) * std::sin(0.5 * omega * 20.0));
  };
  const double e1 = error(20);
  const double e2 = error(40);
  const double slope = std::log2(e1 / e2);
  EXPECT_GT(slope, 7.0);
  EXPECT_LT(slope, 9.5);
  EXPECT_THROW(error(0), NumericalError);
}

TEST(Ode, LandsExactlyOnEndpoint) {
  double last_t = 0.0;
  OdeRhs f = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    last_t = std::max(last_t, t);
    dy = -y;
  };
  Dop853 ode;
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
  ode.integrate(f, 0.0, 1.234, y);
  EXPECT_LE(last_t, 1.234);
  EXPECT_NEAR(y(0).real(), std::exp(-1.234), 1e-10);
}

TEST(Ode, StepLimitThrows) {
  OdeTolerances tol;
  tol.max_steps = 3;
  Dop853 ode(tol);
  Eigen::VectorXcd y = ground();
  EXPECT_THROW(ode.integrate(rabi(10.0), 0.0, 100.0, y), NumericalError);
}
