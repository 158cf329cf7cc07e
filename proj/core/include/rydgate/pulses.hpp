#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rydgate {

enum class PulseKind { square, gaussian, drag };

std::string_view to_string(PulseKind kind);
std::optional<PulseKind> pulse_kind_from_string(std::string_view s);

// A time-limited in-phase envelope on [0, duration]. Gaussian and DRAG kinds
// share the generalized Gaussian base
//
//   A * [exp(-(t - T/2)^2 / 2 sigma^2) - exp(-(T/2)^2 / 2 sigma^2)]^(N+1)
//
// whose first N derivatives vanish at both ends. DRAG adds
// sum_k alpha_{2k} d^{2k}/dt^{2k} of the base. The whole envelope is
// multiplied by amp_scale.
struct PulseShape {
  PulseKind kind = PulseKind::square;
  double duration = 0.0;          // ns
  double sigma = 0.0;             // ns
  int derivative_order = 0;       // N, even
  double amplitude = 0.0;         // A (rad/ns)
  double area = 0.0;              // target area theta (rad), before amp_scale
  std::vector<double> drag_coeffs;       // alpha_2, alpha_4, ... (ns^2, ns^4, ...)
  std::vector<double> null_frequencies;  // rad/ns
  double detuning = 0.0;          // constant drive offset Lambda (rad/ns)
  double amp_scale = 1.0;

  bool operator==(const PulseShape&) const = default;
};

inline constexpr double kDefaultSigmaRatio = 2.0 / 3.0;

// Uncalibrated constructors (amplitude 1); use calibrate_area afterwards.
PulseShape square_shape(double duration);
PulseShape gaussian_shape(double duration, int derivative_order,
                          std::optional<double> sigma = std::nullopt);
// Derivative order is 2 * null_frequencies.size().
PulseShape drag_shape(double duration, std::span<const double> null_frequencies,
                      std::optional<double> sigma = std::nullopt);

double square_envelope(const PulseShape& shape, double t);
double gaussian_envelope(const PulseShape& shape, double t);
double drag_envelope(const PulseShape& shape, double t);
// Dispatches on shape.kind.
double envelope(const PulseShape& shape, double t);

// Exact k-th time derivative of the scaled generalized Gaussian base, from its
// expansion into pure Gaussians with Hermite-polynomial derivatives.
double envelope_derivative(const PulseShape& shape, double t, int order);
// True if derivatives of this order are guaranteed to vanish at t = 0 and T.
bool derivative_vanishes_at_edges(const PulseShape& shape, int order);

// alpha_{2k} = e_k(1/delta_1^2, ..., 1/delta_m^2), the coefficients that zero
// 1 + sum_k alpha_{2k} (-i delta_j)^{2k} at every delta_j.
std::vector<double> drag_coefficients(std::span<const double> null_frequencies);

// Integral of the unscaled base shape (amplitude 1, amp_scale 1) over [0, T].
double base_area(const PulseShape& shape);
// Analytic integral of envelope(shape, .) over [0, T].
double pulse_area(const PulseShape& shape);

// Sets the amplitude so that the unscaled envelope integrates to theta. The
// sign of theta is carried by the amplitude.
PulseShape calibrate_area(PulseShape shape, double theta);

// Evaluator with the shape constants precomputed. Evaluates the full
// envelope (including amp_scale); zero outside [0, T].
class EnvelopeEvaluator {
 public:
  explicit EnvelopeEvaluator(const PulseShape& shape);
  double operator()(double t) const;
  double derivative(double t, int order) const;
  // Same envelope in extended precision, for spectra near a DRAG null.
  long double extended(long double t) const;
  const PulseShape& shape() const { return shape_; }

 private:
  struct Kernels;
  PulseShape shape_;
  std::shared_ptr<const Kernels> kernel_;
};

struct SpectrumOptions {
  // Absolute tolerance as a fraction of (peak |f|) * T.
  double relative_to_peak_tol = 1e-12;
  int max_intervals = 20000;
};

// Finite Fourier transform S(f, delta) = int_0^T f(t) exp(i delta t) dt by
// globally adaptive Gauss-Kronrod quadrature. Throws NumericalError if the
// tolerance is not reached. The PulseShape overload integrates in extended
// precision so that DRAG nulls resolve below double rounding.
std::complex<double> spectrum(const std::function<double(double)>& f, double delta, double T,
                              const SpectrumOptions& options = {});
std::complex<double> spectrum(const PulseShape& shape, double delta,
                              const SpectrumOptions& options = {});

// Samples of the envelope on [0, T] inclusive at the given step.
struct WaveformSample {
  double t;
  double value;
};
std::vector<WaveformSample> sample_waveform(const PulseShape& shape, double step);

}  // namespace rydgate
