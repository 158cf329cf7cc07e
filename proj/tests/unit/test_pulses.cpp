#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rydgate/errors.hpp"
#include "rydgate/params.hpp"
#include "rydgate/pulses.hpp"
#include "rydgate/units.hpp"

using namespace rydgate;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

std::vector<double> s1_control_nulls() {
  const auto s = load_setting("S1");
  return {s.delta_p1_half, s.delta_p3_half};
}

}  // namespace

TEST(Pulses, KindNames) {
  for (auto k : {PulseKind::square, PulseKind::gaussian, PulseKind::drag}) {
    EXPECT_EQ(pulse_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(pulse_kind_from_string("sinc").has_value());
}

TEST(Pulses, DragCoefficientsTwoNulls) {
  const double d1 = 2.0, d2 = 3.0;
  const std::vector<double> nulls{d1, d2};
  const auto a = drag_coefficients(nulls);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[0], 1.0 / (d1 * d1) + 1.0 / (d2 * d2));
  EXPECT_DOUBLE_EQ(a[1], 1.0 / (d1 * d1 * d2 * d2));
  for (double d : {d1, -d1, d2, -d2}) {
    EXPECT_NEAR(1.0 - a[0] * d * d + a[1] * d * d * d * d, 0.0, 1e-14);
  }
}

TEST(Pulses, DragCoefficientsThreeNulls) {
  const std::vector<double> nulls{1.0, -2.0, 4.0};
  const auto a = drag_coefficients(nulls);
  ASSERT_EQ(a.size(), 3u);
  for (double d : nulls) {
    std::complex<double> p = 1.0;
    std::complex<double> z = std::complex<double>(0.0, -d);
    for (std::size_t k = 0; k < a.size(); ++k) p += a[k] * std::pow(z, 2.0 * (k + 1.0));
    EXPECT_LT(std::abs(p), 1e-13);
  }
}

TEST(Pulses, ConstructorErrors) {
  EXPECT_THROW(square_shape(0.0), ConfigError);
  EXPECT_THROW(square_shape(-1.0), ConfigError);
  EXPECT_THROW(gaussian_shape(10.0, 3), ConfigError);
  EXPECT_THROW(gaussian_shape(10.0, 24), ConfigError);
  EXPECT_THROW(gaussian_shape(10.0, 2, -1.0), ConfigError);
  const std::vector<double> dup{1.0, -1.0};
  EXPECT_THROW(drag_shape(10.0, dup), ConfigError);
  const std::vector<double> zero{0.0};
  EXPECT_THROW(drag_shape(10.0, zero), ConfigError);
  EXPECT_THROW(drag_shape(10.0, std::vector<double>{}), ConfigError);
}

TEST(Pulses, DefaultSigmaAndOrder) {
  const auto nulls = s1_control_nulls();
  const auto d = drag_shape(15.0, nulls);
  EXPECT_EQ(d.derivative_order, 4);
  EXPECT_DOUBLE_EQ(d.sigma, 10.0);
  EXPECT_EQ(d.drag_coeffs.size(), 2u);
}

TEST(Pulses, GaussianMatchesClosedForm) {
  auto g = calibrate_area(gaussian_shape(30.0, 2), kPi);
  const double sigma = g.sigma;
  const double c = std::exp(-15.0 * 15.0 / (2 * sigma * sigma));
  for (double t : {0.0, 3.0, 11.5, 15.0, 27.0, 30.0}) {
    const double x = t - 15.0;
    const double ref = g.amplitude * std::pow(std::exp(-x * x / (2 * sigma * sigma)) - c, 3);
    EXPECT_NEAR(envelope(g, t), ref, 1e-14 * g.amplitude);
  }
  EXPECT_EQ(envelope(g, -0.1), 0.0);
  EXPECT_EQ(envelope(g, 30.1), 0.0);
}

TEST(Pulses, DragSingleNullClosedForm) {
  const std::vector<double> nulls{-ghz_to_angular(1.54)};
  auto d = calibrate_area(drag_shape(25.0, nulls), 2 * kPi);
  const double s2 = d.sigma * d.sigma;
  const double c = std::exp(-12.5 * 12.5 / (2 * s2));
  const double alpha = 1.0 / (nulls[0] * nulls[0]);
  EXPECT_DOUBLE_EQ(d.drag_coeffs[0], alpha);
  for (double t : {0.5, 4.0, 12.5, 19.0, 24.9}) {
    const double x = t - 12.5;
    const double e = std::exp(-x * x / (2 * s2));
    const double e1 = -x / s2 * e;
    const double e2 = (x * x / (s2 * s2) - 1.0 / s2) * e;
    const double g = e - c;
    const double f = g * g * g;
    const double f2 = 6 * g * e1 * e1 + 3 * g * g * e2;
    EXPECT_NEAR(envelope(d, t), d.amplitude * (f + alpha * f2), 1e-13 * d.amplitude);
  }
}

TEST(Pulses, AreaCalibration) {
  const auto nulls = s1_control_nulls();
  for (const auto& shape : {square_shape(20.0), gaussian_shape(20.0, 4), drag_shape(20.0, nulls)}) {
    const auto p = calibrate_area(shape, -kPi);
    EXPECT_NEAR(pulse_area(p), -kPi, 1e-12);
    EXPECT_NEAR(simpson([&](double t) { return envelope(p, t); }, 0.0, 20.0), -kPi, 1e-9)
        << to_string(shape.kind);
  }
}

TEST(Pulses, DragKeepsGaussianAmplitude) {
  const auto nulls = s1_control_nulls();
  const auto g = calibrate_area(gaussian_shape(12.0, 4), kPi);
  const auto d = calibrate_area(drag_shape(12.0, nulls), kPi);
  EXPECT_NEAR(d.amplitude, g.amplitude, 1e-12 * g.amplitude);
}

TEST(Pulses, AmpScaleMultipliesEnvelope) {
  auto p = calibrate_area(gaussian_shape(20.0, 2), kPi);
  const double v = envelope(p, 7.0);
  p.amp_scale = 1.05;
  EXPECT_NEAR(envelope(p, 7.0), 1.05 * v, 1e-15);
  EXPECT_NEAR(pulse_area(p), 1.05 * kPi, 1e-12);
}

TEST(Pulses, DerivativesMatchFiniteDifferences) {
  const auto p = calibrate_area(gaussian_shape(20.0, 4), kPi);
  const double h = 1e-4;
  for (int k = 1; k <= 6; ++k) {
    for (double t : {2.0, 8.3, 10.0, 15.5}) {
      const double fd =
          (envelope_derivative(p, t + h, k - 1) - envelope_derivative(p, t - h, k - 1)) / (2 * h);
      const double scale = std::abs(envelope_derivative(p, 10.0, k - (k % 2))) + 1e-3;
      EXPECT_NEAR(envelope_derivative(p, t, k), fd, 1e-6 * scale) << "k=" << k << " t=" << t;
    }
  }
  EXPECT_NEAR(envelope_derivative(p, 6.0, 0), envelope(p, 6.0), 1e-15);
}

TEST(Pulses, DerivativesVanishAtEdges) {
  const auto p = calibrate_area(gaussian_shape(20.0, 4), kPi);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_TRUE(derivative_vanishes_at_edges(p, k));
    const double scale = std::abs(envelope_derivative(p, 10.0, k)) + std::abs(envelope_derivative(p, 5.0, k));
    EXPECT_LT(std::abs(envelope_derivative(p, 0.0, k)), 1e-10 * scale) << k;
    EXPECT_LT(std::abs(envelope_derivative(p, 20.0, k)), 1e-10 * scale) << k;
  }
  EXPECT_FALSE(derivative_vanishes_at_edges(p, 5));
  EXPECT_GT(std::abs(envelope_derivative(p, 0.0, 5)), 1e-6);
  EXPECT_FALSE(derivative_vanishes_at_edges(calibrate_area(square_shape(5.0), 1.0), 0));
}

TEST(Pulses, SquareSpectrumAnalytic) {
  const auto p = calibrate_area(square_shape(10.0), kPi);
  for (double delta : {0.0, 0.3, -2.0, 7.7}) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> ref =
        delta == 0.0 ? std::complex<double>(kPi)
                     : p.amplitude * (std::exp(i * delta * 10.0) - 1.0) / (i * delta);
    EXPECT_LT(std::abs(spectrum(p, delta) - ref), 1e-11);
  }
}

TEST(Pulses, GaussianSpectrumMatchesSimpson) {
  const auto p = calibrate_area(gaussian_shape(16.0, 2), kPi);
  const double delta = 1.3;
  const double re = simpson([&](double t) { return envelope(p, t) * std::cos(delta * t); }, 0, 16.0);
  const double im = simpson([&](double t) { return envelope(p, t) * std::sin(delta * t); }, 0, 16.0);
  const auto s = spectrum(p, delta);
  EXPECT_NEAR(s.real(), re, 1e-10);
  EXPECT_NEAR(s.imag(), im, 1e-10);
}

TEST(Pulses, DragSpectralNulls) {
  const auto s1 = load_setting("S1");
  const auto control_nulls = s1_control_nulls();
  const std::vector<double> target_nulls{-s1.b0};
  for (double tau : {25.0, 50.0, 100.0}) {
    const auto control = calibrate_area(drag_shape(tau / 2, control_nulls), kPi);
    const auto target = calibrate_area(drag_shape(tau, target_nulls), 2 * kPi);
    for (const auto* p : {&control, &target}) {
      const double dc = std::abs(spectrum(*p, 0.0));
      for (double d : p->null_frequencies) {
        EXPECT_LT(std::abs(spectrum(*p, d)) / dc, 1e-9) << "tau=" << tau << " delta=" << d;
      }
    }
  }
}

TEST(Pulses, DragSpectrumIsGaussianTimesNullPolynomial) {
  const auto nulls = s1_control_nulls();
  const auto d = calibrate_area(drag_shape(12.0, nulls), kPi);
  const auto g = calibrate_area(gaussian_shape(12.0, 4), kPi);
  for (double delta : {0.3, 1.0, -2.5, 6.0}) {
    const double poly = 1.0 - d.drag_coeffs[0] * delta * delta + d.drag_coeffs[1] * std::pow(delta, 4);
    const auto sg = spectrum(g, delta);
    EXPECT_LT(std::abs(spectrum(d, delta) - poly * sg), 1e-9 * std::abs(sg) + 1e-12) << delta;
  }
}

TEST(Pulses, SampleWaveform) {
  const auto p = calibrate_area(gaussian_shape(10.0, 2), kPi);
  const auto w = sample_waveform(p, 0.5);
  ASSERT_EQ(w.size(), 21u);
  EXPECT_DOUBLE_EQ(w.front().t, 0.0);
  EXPECT_DOUBLE_EQ(w.back().t, 10.0);
  EXPECT_NEAR(w[10].value, envelope(p, 5.0), 1e-15);
  EXPECT_THROW(sample_waveform(p, 0.0), ConfigError);
}
