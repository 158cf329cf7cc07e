#include "rydgate/pulses.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "rydgate/errors.hpp"

namespace rydgate {

std::string_view to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::square: return "square";
    case PulseKind::gaussian: return "gaussian";
    case PulseKind::drag: return "drag";
  }
  return "square";
}

std::optional<PulseKind> pulse_kind_from_string(std::string_view s) {
  for (PulseKind k : {PulseKind::square, PulseKind::gaussian, PulseKind::drag}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace detail {

template <class R>
struct GaussianKernel {
  R center = 0;
  R beta = 0;  // 1 / (sigma sqrt 2)
  R edge = 0;  // c
  int power = 0;
  R scale = 0;
};

}  // namespace detail

struct EnvelopeEvaluator::Kernels {
  detail::GaussianKernel<double> fast;
  detail::GaussianKernel<long double> extended;
};

namespace {

using detail::GaussianKernel;

constexpr int kMaxOrder = 24;

void check_duration(double duration) {
  if (!(duration > 0.0 && std::isfinite(duration))) {
    throw ConfigError("pulse duration must be positive and finite");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Physicists' Hermite polynomials H_0..H_order at y.
template <class R>
void hermite(R y, int order, R* out) {
  out[0] = 1;
  if (order >= 1) out[1] = 2 * y;
  for (int n = 1; n < order; ++n) out[n + 1] = 2 * y * out[n] - R(2 * n) * out[n - 1];
}

// Taylor coefficients f_k = f^(k)/k!, k = 0..order, of (exp(-u^2) - c)^power
// with u = beta (t - center). Powers of the truncated series of the bracket
// avoid the cancellation of a binomial expansion.
template <class R>
void taylor(const GaussianKernel<R>& g, R t, int order, R* out) {
  using std::exp;
  const R u = g.beta * (t - g.center);
  const R e1 = exp(-u * u);
  R h[kMaxOrder + 1];
  hermite(u, order, h);
  R b[kMaxOrder + 1];
  b[0] = e1 - g.edge;
  R scale = 1;
  for (int k = 1; k <= order; ++k) {
    scale *= -g.beta / R(k);
    b[k] = scale * h[k] * e1;
  }
  for (int k = 0; k <= order; ++k) out[k] = k == 0 ? R(1) : R(0);
  for (int i = 0; i < g.power; ++i) {
    for (int k = order; k >= 0; --k) {
      R acc = 0;
      for (int j = 0; j <= k; ++j) acc += out[j] * b[k - j];
      out[k] = acc;
    }
  }
}

template <class R>
R kernel_value(const GaussianKernel<R>& g, const std::vector<double>& alpha, PulseKind kind, R t) {
  using std::exp;
  using std::pow;
  if (kind == PulseKind::square) return g.scale;
  if (kind == PulseKind::gaussian) {
    const R u = g.beta * (t - g.center);
    return g.scale * pow(exp(-u * u) - g.edge, g.power);
  }
  const int order = 2 * static_cast<int>(alpha.size());
  R f[kMaxOrder + 1];
  taylor(g, t, order, f);
  R sum = f[0];
  R fact = 1;
  for (int k = 1; k <= order; ++k) {
    fact *= R(k);
    if (k % 2 == 0) sum += R(alpha[k / 2 - 1]) * fact * f[k];
  }
  return g.scale * sum;
}

template <class R>
GaussianKernel<R> make_kernel(const PulseShape& shape) {
  GaussianKernel<R> g;
  g.scale = R(shape.amplitude) * R(shape.amp_scale);
  g.center = R(shape.duration) / 2;
  if (shape.kind == PulseKind::square) return g;
  using std::exp;
  using std::sqrt;
  g.beta = 1 / (sqrt(R(2)) * R(shape.sigma));
  const R u = g.beta * g.center;
  g.edge = exp(-u * u);
  g.power = shape.derivative_order + 1;
  return g;
}

}  // namespace

PulseShape square_shape(double duration) {
  check_duration(duration);
  PulseShape s;
  s.kind = PulseKind::square;
  s.duration = duration;
  s.amplitude = 1.0;
  return s;
}

PulseShape gaussian_shape(double duration, int derivative_order, std::optional<double> sigma) {
  check_duration(duration);
  if (derivative_order < 0 || derivative_order % 2 != 0 || derivative_order > kMaxOrder - 2) {
    throw ConfigError("derivative order must be an even integer in [0, 22]");
  }
  PulseShape s;
  s.kind = PulseKind::gaussian;
  s.duration = duration;
  s.sigma = sigma.value_or(kDefaultSigmaRatio * duration);
  if (!(s.sigma > 0.0)) throw ConfigError("sigma must be positive");
  s.derivative_order = derivative_order;
  s.amplitude = 1.0;
  return s;
}

PulseShape drag_shape(double duration, std::span<const double> null_frequencies,
                      std::optional<double> sigma) {
  PulseShape s = gaussian_shape(duration, 2 * static_cast<int>(null_frequencies.size()), sigma);
  s.kind = PulseKind::drag;
  s.null_frequencies.assign(null_frequencies.begin(), null_frequencies.end());
  s.drag_coeffs = drag_coefficients(null_frequencies);
  return s;
}

std::vector<double> drag_coefficients(std::span<const double> null_frequencies) {
  const std::size_t m = null_frequencies.size();
  if (m == 0) throw ConfigError("DRAG needs at least one null frequency");
  std::vector<double> inv_sq(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = null_frequencies[j];
    if (!std::isfinite(d) || d == 0.0) {
      throw ConfigError("DRAG null frequencies must be finite and nonzero");
    }
    inv_sq[j] = 1.0 / (d * d);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(std::abs(null_frequencies[i]) - std::abs(null_frequencies[j])) <=
          1e-12 * std::abs(null_frequencies[i])) {
        throw ConfigError("DRAG null frequencies must have distinct magnitudes");
      }
    }
  }
  // Elementary symmetric polynomials by the product expansion of
  // prod_j (1 + x_j z).
  std::vector<double> e(m + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k >= 1; --k) e[k] += inv_sq[j] * e[k - 1];
  }
  return {e.begin() + 1, e.end()};
}

EnvelopeEvaluator::EnvelopeEvaluator(const PulseShape& shape) : shape_(shape) {
  check_duration(shape.duration);
  if (shape.kind == PulseKind::drag &&
      shape.drag_coeffs.size() * 2 != static_cast<std::size_t>(shape.derivative_order)) {
    throw ConfigError("DRAG shape needs derivative_order / 2 coefficients");
  }
  kernel_ = std::make_shared<const Kernels>(Kernels{make_kernel<double>(shape), make_kernel<long double>(shape)});
}

double EnvelopeEvaluator::derivative(double t, int order) const {
  if (order < 0 || order > kMaxOrder) throw ConfigError("derivative order out of range");
  if (t < 0.0 || t > shape_.duration) return 0.0;
  const auto& g = kernel_->fast;
  if (shape_.kind == PulseKind::square) return order == 0 ? g.scale : 0.0;
  double f[kMaxOrder + 1];
  taylor(g, t, order, f);
  return g.scale * f[order] * std::tgamma(order + 1.0);
}

double EnvelopeEvaluator::operator()(double t) const {
  if (t < 0.0 || t > shape_.duration) return 0.0;
  return kernel_value(kernel_->fast, shape_.drag_coeffs, shape_.kind, t);
}

long double EnvelopeEvaluator::extended(long double t) const {
  if (t < 0.0L || t > static_cast<long double>(shape_.duration)) return 0.0L;
  return kernel_value(kernel_->extended, shape_.drag_coeffs, shape_.kind, t);
}

double square_envelope(const PulseShape& shape, double t) {
  if (shape.kind != PulseKind::square) throw ConfigError("square_envelope needs a square shape");
  if (t < 0.0 || t > shape.duration) return 0.0;
  return shape.amplitude * shape.amp_scale;
}

double gaussian_envelope(const PulseShape& shape, double t) {
  if (shape.kind == PulseKind::square) throw ConfigError("gaussian_envelope needs a Gaussian base");
  PulseShape base = shape;
  base.kind = PulseKind::gaussian;
  return EnvelopeEvaluator(base)(t);
}

double drag_envelope(const PulseShape& shape, double t) {
  if (shape.kind != PulseKind::drag) throw ConfigError("drag_envelope needs a DRAG shape");
  if (shape.drag_coeffs.empty()) throw ConfigError("DRAG shape has no coefficients");
  return EnvelopeEvaluator(shape)(t);
}

double envelope(const PulseShape& shape, double t) {
  switch (shape.kind) {
    case PulseKind::square: return square_envelope(shape, t);
    case PulseKind::gaussian: return gaussian_envelope(shape, t);
    case PulseKind::drag: return drag_envelope(shape, t);
  }
  return 0.0;
}

double envelope_derivative(const PulseShape& shape, double t, int order) {
  if (shape.kind == PulseKind::square) {
    throw ConfigError("envelope_derivative needs a Gaussian base");
  }
  PulseShape base = shape;
  base.kind = PulseKind::gaussian;
  return EnvelopeEvaluator(base).derivative(t, order);
}

bool derivative_vanishes_at_edges(const PulseShape& shape, int order) {
  return shape.kind != PulseKind::square && order >= 0 && order <= shape.derivative_order;
}

double base_area(const PulseShape& shape) {
  check_duration(shape.duration);
  if (shape.kind == PulseKind::square) return shape.duration;
  const double half = 0.5 * shape.duration;
  const double a = 1.0 / (2.0 * shape.sigma * shape.sigma);
  const int p = shape.derivative_order + 1;
  const double c = std::exp(-half * half * a);
  double sum = 0.0;
  for (int j = 0; j <= p; ++j) {
    const double coeff = binomial(p, j) * std::pow(-c, p - j);
    double integral = shape.duration;
    if (j > 0) {
      const double ja = j * a;
      integral = std::sqrt(std::numbers::pi / ja) * std::erf(std::sqrt(ja) * half);
    }
    sum += coeff * integral;
  }
  return sum;
}

double pulse_area(const PulseShape& shape) {
  // Derivative terms integrate to boundary values of lower derivatives, which
  // vanish for orders up to N.
  if (shape.kind == PulseKind::square) return shape.amplitude * shape.amp_scale * shape.duration;
  return shape.amplitude * shape.amp_scale * base_area(shape);
}

PulseShape calibrate_area(PulseShape shape, double theta) {
  if (!(std::abs(theta) > 0.0) || !std::isfinite(theta)) {
    throw ConfigError("pulse area must be nonzero and finite");
  }
  check_duration(shape.duration);
  const double integral = base_area(shape);
  if (!(std::abs(integral) > 0.0) || !std::isfinite(integral)) {
    throw ConfigError("base shape has zero integral");
  }
  shape.amplitude = theta / integral;
  shape.area = theta;
  return shape;
}

namespace {

template <class F>
double sampled_peak(const F& f, double T) {
  double peak = 0.0;
  constexpr int kPeakSamples = 2001;
  for (int i = 0; i < kPeakSamples; ++i) {
    peak = std::max(peak, std::abs(static_cast<double>(f(T * i / (kPeakSamples - 1)))));
  }
  return peak;
}

template <class R, class F>
std::complex<double> adaptive_spectrum(const F& f, double delta, double T, double peak,
                                       const SpectrumOptions& options) {
  check_duration(T);
  using Kronrod = boost::math::quadrature::gauss_kronrod<R, 21>;
  const R d = delta;
  auto integrand = [&](R t) { return f(t) * std::exp(std::complex<R>(0, d * t)); };

  const double tol = options.relative_to_peak_tol * std::max(peak, 1e-300) * T;

  struct Panel {
    R a, b;
    std::complex<R> value;
    R error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto eval = [&](R a, R b) {
    R err = 0;
    auto v = Kronrod::integrate(integrand, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };

  const int initial =
      std::max(4, static_cast<int>(std::ceil(std::abs(delta) * T / std::numbers::pi)));
  std::priority_queue<Panel> panels;
  R total_error = 0;
  for (int i = 0; i < initial; ++i) {
    auto p = eval(R(T) * i / initial, R(T) * (i + 1) / initial);
    total_error += p.error;
    panels.push(p);
  }
  while (total_error > tol) {
    if (static_cast<int>(panels.size()) >= options.max_intervals) {
      std::ostringstream msg;
      msg << "spectrum quadrature did not converge: achieved " << static_cast<double>(total_error) << ", requested "
          << tol;
      throw NumericalError(msg.str());
    }
    Panel worst = panels.top();
    panels.pop();
    const R mid = (worst.a + worst.b) / 2;
    auto left = eval(worst.a, mid);
    auto right = eval(mid, worst.b);
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  std::vector<Panel> ordered;
  ordered.reserve(panels.size());
  while (!panels.empty()) {
    ordered.push_back(panels.top());
    panels.pop();
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::complex<R> sum = 0;
  for (const auto& p : ordered) sum += p.value;
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace

std::complex<double> spectrum(const std::function<double(double)>& f, double delta, double T,
                              const SpectrumOptions& options) {
  check_duration(T);
  return adaptive_spectrum<double>(f, delta, T, sampled_peak(f, T), options);
}

std::complex<double> spectrum(const PulseShape& shape, double delta,
                              const SpectrumOptions& options) {
  const EnvelopeEvaluator eval(shape);
  return adaptive_spectrum<long double>([&](long double t) { return eval.extended(t); }, delta, shape.duration,
                                        sampled_peak(eval, shape.duration), options);
}

std::vector<WaveformSample> sample_waveform(const PulseShape& shape, double step) {
  if (!(step > 0.0)) throw ConfigError("sample step must be positive");
  EnvelopeEvaluator eval(shape);
  const auto count = static_cast<std::size_t>(std::floor(shape.duration / step + 1e-9)) + 1;
  std::vector<WaveformSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::min(shape.duration, i * step);
    out.push_back({t, eval(t)});
  }
  return out;
}

}  // namespace rydgate
