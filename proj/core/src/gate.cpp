#include "rydgate/gate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rydgate/errors.hpp"
#include "rydgate/parallel.hpp"

namespace rydgate {

namespace {

constexpr double kPi = std::numbers::pi;
// |phi_ent - pi| beyond this flags the CNOT frame as unreliable.
constexpr double kPhaseWarning = 0.1;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

PulseShape make_shape(PulseKind kind, double duration, int order,
                      const std::vector<double>& nulls, double sigma_ratio) {
  const double sigma = sigma_ratio * duration;
  switch (kind) {
    case PulseKind::square:
      return square_shape(duration);
    case PulseKind::gaussian:
      return gaussian_shape(duration, order, sigma);
    case PulseKind::drag:
      return drag_shape(duration, nulls, sigma);
  }
  throw ConfigError("unknown pulse kind");
}

Envelope make_envelope(const PulseShape& shape) {
  auto eval = std::make_shared<EnvelopeEvaluator>(shape);
  return [eval](double t) { return (*eval)(t); };
}

void check_spec(const SequenceSpec& spec) {
  if (!(spec.tau_t > 0.0) || !(spec.tau_c > 0.0)) {
    throw ConfigError("pulse durations must be positive");
  }
  if (!std::isfinite(spec.lambda_target) || !std::isfinite(spec.lambda_control)) {
    throw ConfigError("detunings must be finite");
  }
  for (double s : spec.amp_scales) {
    if (!std::isfinite(s)) throw ConfigError("amplitude scales must be finite");
  }
}

Eigen::VectorXcd embed(const Eigen::Vector4cd& v) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kCompositeDim));
  const auto idx = computational_indices();
  for (int k = 0; k < 4; ++k) psi(idx[k]) = v(k);
  return psi;
}

Eigen::Vector4cd restrict_vector(const Eigen::VectorXcd& psi) {
  Eigen::Vector4cd v;
  const auto idx = computational_indices();
  for (int k = 0; k < 4; ++k) v(k) = psi(idx[k]);
  return v;
}

double leaked(const Eigen::VectorXd& pops) {
  double q = 0.0;
  for (auto i : computational_indices()) q += pops(i);
  return 1.0 - q;
}

// Square roots of eigenvalues, with those below the solver's resolution
// (relative to the largest) set to zero; sqrt would amplify their noise.
Eigen::VectorXd resolved_sqrt(const Eigen::VectorXd& ev) {
  const double floor = 16.0 * static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() *
                       ev.cwiseAbs().maxCoeff();
  return ev.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
}

struct BellResult {
  double fidelity;
  double distance;
  bool warning;
};

BellResult bell_metrics(const Eigen::Matrix4cd& rho_q, const GatePhases& phases) {
  const WrappedState w = cnot_wrap(rho_q, phases);
  const Eigen::Vector4cd phi = bell_target();
  const Eigen::Matrix4cd ideal = phi * phi.adjoint();
  const double f = (phi.adjoint() * w.rho * phi)(0, 0).real();
  return {f, trace_distance(w.rho, ideal), w.phase_warning};
}

}  // namespace

std::string_view to_string(Model model) {
  return model == Model::unitary ? "unitary" : "lindblad";
}

std::optional<Model> model_from_string(std::string_view s) {
  if (s == "unitary") return Model::unitary;
  if (s == "lindblad") return Model::lindblad;
  return std::nullopt;
}

SequenceSpec SequenceSpec::make(double tau_t, double tau_c_ratio, PulseKind kind) {
  SequenceSpec spec;
  spec.tau_t = tau_t;
  spec.tau_c = tau_c_ratio * tau_t;
  spec.set_kind(kind);
  return spec;
}

std::array<PulseShape, 3> build_sequence(const SequenceSpec& spec, const PhysicalSetting& setting) {
  check_spec(spec);
  const std::vector<double> control_nulls =
      spec.null_plan.control.value_or(std::vector<double>{setting.delta_p1_half, setting.delta_p3_half});
  const std::vector<double> target_nulls =
      spec.null_plan.target.value_or(std::vector<double>{-setting.b0});

  std::array<PulseShape, 3> out;
  const double areas[3] = {kPi, 2.0 * kPi, -kPi};
  for (int i = 0; i < 3; ++i) {
    const bool target = i == 1;
    PulseShape shape = make_shape(spec.kinds[i], target ? spec.tau_t : spec.tau_c,
                                  target ? spec.target_order : spec.control_order,
                                  target ? target_nulls : control_nulls, spec.sigma_ratio);
    shape = calibrate_area(std::move(shape), areas[i]);
    shape.amp_scale = spec.amp_scales[i];
    shape.detuning = target ? spec.lambda_target : spec.lambda_control;
    out[i] = std::move(shape);
  }
  return out;
}

Schedule build_schedule(const SequenceSpec& spec, const PhysicalSetting& setting) {
  const auto pulses = build_sequence(spec, setting);
  const AtomBasis basis = build_basis(setting);
  auto control_h = std::make_shared<const CompositeHamiltonian>(
      build_composite(setting, basis, basis, spec.lambda_control, 0.0));
  auto target_h = std::make_shared<const CompositeHamiltonian>(
      build_composite(setting, basis, basis, 0.0, spec.lambda_target));

  Schedule s;
  s.segments.push_back({0.0, spec.tau_c, control_h, make_envelope(pulses[0]), {}});
  s.segments.push_back({spec.tau_c, spec.tau_t, target_h, {}, make_envelope(pulses[1])});
  s.segments.push_back({spec.tau_c + spec.tau_t, spec.tau_c, control_h, make_envelope(pulses[2]), {}});
  return s;
}

QuantumState run_sequence(const SequenceSpec& spec, const PhysicalSetting& setting,
                          const QuantumState& initial, Model model, const GateOptions& options) {
  if (initial.dimension() != static_cast<Eigen::Index>(kCompositeDim)) {
    throw ConfigError("initial state is not in the composite space");
  }
  const Schedule schedule = build_schedule(spec, setting);
  if (model == Model::unitary) {
    if (!initial.is_pure()) throw ConfigError("the unitary model needs a pure initial state");
    return propagate_schrodinger(schedule, initial.vector(), options.propagation).state;
  }
  const CollapseSet collapse = build_collapse_set(setting, build_basis(setting), options.decay);
  return propagate_lindblad(schedule, collapse, initial.density(), options.propagation).state;
}

std::array<Eigen::Index, 4> computational_indices() {
  return {static_cast<Eigen::Index>(composite_index(Level::q0, Level::q0)),
          static_cast<Eigen::Index>(composite_index(Level::q0, Level::q1)),
          static_cast<Eigen::Index>(composite_index(Level::q1, Level::q0)),
          static_cast<Eigen::Index>(composite_index(Level::q1, Level::q1))};
}

double GatePhases::entangling() const { return wrap_angle(phi[0] - phi[1] - phi[2] + phi[3]); }

std::array<Eigen::VectorXcd, 4> propagate_basis(const SequenceSpec& spec,
                                                const PhysicalSetting& setting,
                                                const GateOptions& options) {
  const Schedule schedule = build_schedule(spec, setting);
  const auto idx = computational_indices();
  auto finals = parallel_map(4, options.workers, [&](std::size_t k) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kCompositeDim));
    psi(idx[k]) = 1.0;
    return propagate_schrodinger(schedule, psi, options.propagation).state.vector();
  });
  return {finals[0], finals[1], finals[2], finals[3]};
}

GatePhases phases_from_basis(const std::array<Eigen::VectorXcd, 4>& finals) {
  static constexpr const char* kNames[4] = {"00", "01", "10", "11"};
  const auto idx = computational_indices();
  GatePhases p;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> overlap = finals[k](idx[k]);
    if (std::abs(overlap) < 0.5) {
      std::ostringstream msg;
      msg << "|<" << kNames[k] << "|psi_final>| = " << std::abs(overlap)
          << " is below 0.5; phases are unreliable (check the blockade strength and leakage)";
      throw NumericalError(msg.str());
    }
    p.phi[k] = std::arg(overlap);
  }
  return p;
}

GatePhases extract_phases(const SequenceSpec& spec, const PhysicalSetting& setting,
                          const GateOptions& options) {
  return phases_from_basis(propagate_basis(spec, setting, options));
}

Eigen::Matrix2cd pi_half_rotation(double h00, double h01, double h10, double h11) {
  Eigen::Matrix2cd r;
  r << std::polar(1.0, h00), std::polar(1.0, h01), std::polar(1.0, h10), std::polar(1.0, h11);
  return r / std::sqrt(2.0);
}

Eigen::Vector4cd bell_test_input() {
  const Eigen::Matrix2cd h = pi_half_rotation(0.0, 0.0, 0.0, kPi);
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = v(2) = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd op = Eigen::Matrix4cd::Zero();
  op.topLeftCorner<2, 2>() = h;
  op.bottomRightCorner<2, 2>() = h;
  return op * v;
}

Eigen::Vector4cd bell_target() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

WrappedState cnot_wrap(const Eigen::Matrix4cd& rho_q, const GatePhases& phases) {
  const double phi_tilde = phases.phi[2] - phases.phi[3];
  const Eigen::Matrix2cd r = pi_half_rotation(kPi, phi_tilde, -phi_tilde, 0.0);
  const double chi = phases.phi[0] - phases.phi[3] + kPi;
  Eigen::Matrix4cd op = Eigen::Matrix4cd::Zero();
  op.topLeftCorner<2, 2>() = r;
  op.bottomRightCorner<2, 2>() = std::polar(1.0, chi) * r;
  WrappedState w;
  w.rho = op * rho_q * op.adjoint();
  w.phase_warning = std::abs(wrap_angle(phases.entangling() - kPi)) > kPhaseWarning;
  return w;
}

Eigen::Matrix4cd restrict_to_computational(const Eigen::MatrixXcd& rho) {
  const auto idx = computational_indices();
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = rho(idx[i], idx[j]);
  }
  return out;
}

double uhlmann_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw ConfigError("fidelity needs square matrices of equal size");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd ev = resolved_sqrt(es.eigenvalues());
  const Eigen::MatrixXcd sqrt_rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::MatrixXcd m = sqrt_rho * sigma * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = resolved_sqrt(em.eigenvalues()).sum();
  return tr * tr;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw ConfigError("trace distance needs square matrices of equal size");
  }
  const Eigen::MatrixXcd d = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

GateMetrics evaluate_gate(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                          const GateOptions& options, MetricSelection select) {
  const auto finals = propagate_basis(spec, setting, options);
  GateMetrics m;
  m.phases = phases_from_basis(finals);
  m.entangling_phase = m.phases.entangling();

  if (model == Model::unitary) {
    if (select.population_error) {
      double sum = 0.0;
      for (const auto& psi : finals) sum += leaked(psi.cwiseAbs2());
      m.population_error = sum / 4.0;
    }
    if (select.bell) {
      const Eigen::Vector4cd in = bell_test_input();
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(finals[0].size());
      for (int k = 0; k < 4; ++k) out += in(k) * finals[k];
      const Eigen::Vector4cd q = restrict_vector(out);
      const auto b = bell_metrics(q * q.adjoint(), m.phases);
      m.bell_fidelity = b.fidelity;
      m.trace_distance = b.distance;
      m.phase_warning = b.warning;
    }
    return m;
  }

  // Lindblad: up to five independent density-matrix runs.
  std::vector<QuantumState> inputs;
  if (select.bell) inputs.emplace_back(embed(bell_test_input()));
  if (select.population_error) {
    for (auto i : computational_indices()) {
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kCompositeDim));
      psi(i) = 1.0;
      inputs.emplace_back(std::move(psi));
    }
  }
  const Schedule schedule = build_schedule(spec, setting);
  const CollapseSet collapse = build_collapse_set(setting, build_basis(setting), options.decay);
  const auto outs = parallel_map(inputs.size(), options.workers, [&](std::size_t k) {
    return propagate_lindblad(schedule, collapse, inputs[k].density(), options.propagation).state.matrix();
  });
  std::size_t next = 0;
  if (select.bell) {
    const auto b = bell_metrics(restrict_to_computational(outs[next++]), m.phases);
    m.bell_fidelity = b.fidelity;
    m.trace_distance = b.distance;
    m.phase_warning = b.warning;
  }
  if (select.population_error) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) sum += leaked(outs[next++].diagonal().real());
    m.population_error = sum / 4.0;
  }
  return m;
}

double population_error(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                        const GateOptions& options) {
  if (model == Model::unitary) {
    const auto finals = propagate_basis(spec, setting, options);
    double sum = 0.0;
    for (const auto& psi : finals) sum += leaked(psi.cwiseAbs2());
    return sum / 4.0;
  }
  return evaluate_gate(spec, setting, model, options, {.population_error = true, .bell = false})
      .population_error;
}

double bell_fidelity(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                     const GateOptions& options) {
  return evaluate_gate(spec, setting, model, options, {.population_error = false, .bell = true})
      .bell_fidelity;
}

}  // namespace rydgate
