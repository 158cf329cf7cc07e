#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rydgate/atom.hpp"
#include "rydgate/errors.hpp"
#include "rydgate/gate.hpp"
#include "rydgate/ode.hpp"
#include "rydgate/params.hpp"

using namespace rydgate;

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI{0.0, 1.0};

Eigen::Matrix4cd pure(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

// Final state of the four inputs under an ideal phase gate diag(e^{i phi}).
Eigen::Vector4cd ideal_output(const GatePhases& p) {
  Eigen::Vector4cd v = bell_test_input();
  for (int k = 0; k < 4; ++k) v(k) *= std::polar(1.0, p.phi[k]);
  return v;
}

// Single-atom 10-level propagation used as a factorized oracle: drift from
// the basis detunings, drive w/2 between source and Rydberg level.
void single_atom_evolve(const AtomBasis& basis, const PulseShape& pulse, Eigen::VectorXcd& y) {
  const EnvelopeEvaluator env(pulse);
  Eigen::MatrixXd drive = Eigen::MatrixXd::Zero(10, 10);
  Eigen::VectorXd drift = Eigen::VectorXd::Zero(10);
  for (const auto& l : basis.levels()) {
    drift(index_of(l.label)) = l.rot_detuning;
    if (l.source) {
      drive(index_of(l.label), index_of(*l.source)) = 0.5 * l.rabi_weight;
      drive(index_of(*l.source), index_of(l.label)) = 0.5 * l.rabi_weight;
    }
  }
  OdeRhs f = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy = -kI * (drift.cwiseProduct(y) + env(t) * (drive * y));
  };
  Dop853 ode;
  ode.integrate(f, 0.0, pulse.duration, y);
}

Eigen::VectorXcd level_vector(Level l) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(10);
  y(index_of(l)) = 1.0;
  return y;
}

}  // namespace

TEST(Gate, ModelNames) {
  EXPECT_EQ(model_from_string("unitary"), Model::unitary);
  EXPECT_EQ(model_from_string(to_string(Model::lindblad)), Model::lindblad);
  EXPECT_FALSE(model_from_string("open").has_value());
}

TEST(Gate, SequenceSpecMake) {
  const auto spec = SequenceSpec::make(30.0, 1.0 / 3.0, PulseKind::gaussian);
  EXPECT_DOUBLE_EQ(spec.tau_c, 10.0);
  EXPECT_DOUBLE_EQ(spec.gate_time(), 50.0);
  EXPECT_EQ(spec.kinds[1], PulseKind::gaussian);
}

TEST(Gate, BuildSequence) {
  const auto s = load_setting("S1");
  auto spec = SequenceSpec::make(30.0, 0.5, PulseKind::drag);
  spec.amp_scales = {1.01, 0.98, 1.01};
  spec.lambda_target = 0.01;
  const auto p = build_sequence(spec, s);
  EXPECT_NEAR(pulse_area(p[0]) / 1.01, kPi, 1e-12);
  EXPECT_NEAR(pulse_area(p[1]) / 0.98, 2 * kPi, 1e-12);
  EXPECT_NEAR(pulse_area(p[2]) / 1.01, -kPi, 1e-12);
  EXPECT_EQ(p[0].derivative_order, 4);
  EXPECT_EQ(p[1].derivative_order, 2);
  EXPECT_DOUBLE_EQ(p[0].null_frequencies[0], s.delta_p1_half);
  EXPECT_DOUBLE_EQ(p[1].null_frequencies[0], -s.b0);
  EXPECT_DOUBLE_EQ(p[1].detuning, 0.01);
  for (double t : {1.0, 7.5, 12.0}) EXPECT_NEAR(envelope(p[2], t), -envelope(p[0], t), 1e-15);

  const auto sched = build_schedule(spec, s);
  ASSERT_EQ(sched.segments.size(), 3u);
  EXPECT_DOUBLE_EQ(sched.segments[1].start, 15.0);
  EXPECT_DOUBLE_EQ(sched.end_time(), 60.0);
  EXPECT_EQ(sched.segments[0].hamiltonian, sched.segments[2].hamiltonian);
  EXPECT_DOUBLE_EQ(sched.segments[1].hamiltonian->lambda_target, 0.01);

  spec.tau_t = -1.0;
  EXPECT_THROW(build_sequence(spec, s), ConfigError);
}

TEST(Gate, PiHalfRotation) {
  const Eigen::Matrix2cd h = pi_half_rotation(0, 0, 0, kPi);
  Eigen::Matrix2cd hadamard;
  hadamard << 1, 1, 1, -1;
  EXPECT_LT((h - hadamard / std::sqrt(2.0)).norm(), 1e-15);
  const Eigen::Matrix2cd r = pi_half_rotation(kPi, 0.7, -0.7, 0.0);
  EXPECT_LT((r * r.adjoint() - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
}

TEST(Gate, BellVectors) {
  const Eigen::Vector4cd in = bell_test_input();
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(in(k) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(bell_target().norm(), 1.0, 1e-15);
}

TEST(Gate, WrapperMapsIdealPhaseGatesToBellState) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    GatePhases p;
    p.phi = {u(rng), u(rng), u(rng), 0.0};
    p.phi[3] = kPi - p.phi[0] + p.phi[1] + p.phi[2];
    EXPECT_NEAR(std::abs(p.entangling()), kPi, 1e-12);
    const auto w = cnot_wrap(pure(ideal_output(p)), p);
    EXPECT_FALSE(w.phase_warning);
    EXPECT_NEAR(uhlmann_fidelity(w.rho, pure(bell_target())), 1.0, 1e-12);
    EXPECT_NEAR(trace_distance(w.rho, pure(bell_target())), 0.0, 1e-7);
  }
}

TEST(Gate, WrapperFlagsNonEntanglingPhases) {
  GatePhases p;
  p.phi = {0.3, 0.1, -0.2, 0.0};
  const auto w = cnot_wrap(pure(ideal_output(p)), p);
  EXPECT_TRUE(w.phase_warning);
  EXPECT_LT(uhlmann_fidelity(w.rho, pure(bell_target())), 0.6);
}

TEST(Gate, EntanglingPhaseWraps) {
  GatePhases p;
  p.phi = {kPi, -kPi, 0.0, kPi};
  EXPECT_NEAR(p.entangling(), kPi, 1e-12);
  p.phi = {0.1, 0.0, 0.0, -0.2};
  EXPECT_NEAR(p.entangling(), -0.1, 1e-15);
}

TEST(Gate, FidelityAndTraceDistance) {
  Eigen::Vector4cd minus = Eigen::Vector4cd::Zero();
  minus(0) = 1.0 / std::sqrt(2.0);
  minus(3) = -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(uhlmann_fidelity(pure(minus), pure(bell_target())), 0.0, 1e-12);
  EXPECT_NEAR(trace_distance(pure(minus), pure(bell_target())), 1.0, 1e-12);

  Eigen::Vector4cd a(0.6, std::complex<double>(0, 0.8), 0, 0);
  Eigen::Vector4cd b(0.8, 0, 0.6, 0);
  const double overlap = std::norm(a.dot(b));
  EXPECT_NEAR(uhlmann_fidelity(pure(a), pure(b)), overlap, 1e-12);
  EXPECT_NEAR(trace_distance(pure(a), pure(b)), std::sqrt(1.0 - overlap), 1e-12);

  const Eigen::Vector4d p(0.5, 0.3, 0.2, 0.0), q(0.25, 0.25, 0.25, 0.25);
  const Eigen::Matrix4cd rp = p.cast<std::complex<double>>().asDiagonal();
  const Eigen::Matrix4cd rq = q.cast<std::complex<double>>().asDiagonal();
  EXPECT_NEAR(uhlmann_fidelity(rp, rq), std::pow(p.cwiseProduct(q).cwiseSqrt().sum(), 2), 1e-12);
  EXPECT_NEAR(trace_distance(rp, rq), 0.5 * (p - q).cwiseAbs().sum(), 1e-12);
}

TEST(Gate, RestrictToComputational) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(100, 100);
  const auto idx = computational_indices();
  EXPECT_EQ(idx[2], static_cast<Eigen::Index>(composite_index(Level::q1, Level::q0)));
  rho(idx[1], idx[2]) = 0.25;
  rho(idx[3], idx[3]) = 0.5;
  rho(5, 5) = 1.0;
  const Eigen::Matrix4cd q = restrict_to_computational(rho);
  EXPECT_EQ(q(1, 2), std::complex<double>(0.25));
  EXPECT_EQ(q(3, 3), std::complex<double>(0.5));
  EXPECT_NEAR(q.trace().real(), 0.5, 1e-15);
}

TEST(Gate, ZeroAmplitudeIsIdentity) {
  const auto s = load_setting("S1");
  auto spec = SequenceSpec::make(20.0, 0.5, PulseKind::drag);
  spec.amp_scales = {0.0, 0.0, 0.0};
  const auto m = evaluate_gate(spec, s, Model::unitary);
  for (double phi : m.phases.phi) EXPECT_NEAR(phi, 0.0, 1e-12);
  EXPECT_NEAR(m.population_error, 0.0, 1e-15);
  EXPECT_TRUE(m.phase_warning);
}

TEST(Gate, PhasesFactorizeWithoutBlockade) {
  const auto s = parse_setting_text("base = S1\nb0_GHz = 0\n");
  auto spec = SequenceSpec::make(24.0, 0.5, PulseKind::gaussian);
  const auto phases = extract_phases(spec, s);
  const auto pulses = build_sequence(spec, s);
  const auto basis = build_basis(s);
  // Control pulses act on the control atom, the target pulse on the target.
  auto control_amp = [&](Level q) {
    auto y = level_vector(q);
    single_atom_evolve(basis, pulses[0], y);
    single_atom_evolve(basis, pulses[2], y);
    return y(index_of(q));
  };
  auto target_amp = [&](Level q) {
    auto y = level_vector(q);
    single_atom_evolve(basis, pulses[1], y);
    return y(index_of(q));
  };
  const Level q[2] = {Level::q0, Level::q1};
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const double ref = std::arg(control_amp(q[c]) * target_amp(q[t]));
      EXPECT_NEAR(std::remainder(phases.phi[2 * c + t] - ref, 2 * kPi), 0.0, 1e-7) << c << t;
    }
  }
  EXPECT_NEAR(phases.entangling(), 0.0, 1e-7);
}

TEST(Gate, DragSequenceEntangles) {
  const auto s = load_setting("S1");
  const auto m = evaluate_gate(SequenceSpec::make(30.0, 0.5, PulseKind::drag), s, Model::unitary);
  EXPECT_NEAR(std::abs(m.entangling_phase), kPi, 0.2);
  EXPECT_LT(m.population_error, 1e-6);
  EXPECT_GT(m.bell_fidelity, 0.99);
  EXPECT_LE(m.trace_distance, 1.0);
}

TEST(Gate, SquareLeaksMoreThanGaussian) {
  const auto s = load_setting("S1");
  const double sq = population_error(SequenceSpec::make(30.0, 0.5, PulseKind::square), s, Model::unitary);
  const double ga = population_error(SequenceSpec::make(30.0, 0.5, PulseKind::gaussian), s, Model::unitary);
  EXPECT_GT(sq, 100.0 * ga);
}

TEST(Gate, DeterministicAcrossWorkers) {
  const auto s = load_setting("S2");
  const auto spec = SequenceSpec::make(20.0, 0.5, PulseKind::drag);
  GateOptions one, two;
  two.workers = 2;
  const auto a = evaluate_gate(spec, s, Model::unitary, one);
  const auto b = evaluate_gate(spec, s, Model::unitary, two);
  EXPECT_EQ(a.population_error, b.population_error);
  EXPECT_EQ(a.bell_fidelity, b.bell_fidelity);
  EXPECT_EQ(a.phases.phi, b.phases.phi);
}

TEST(Gate, LindbladWithoutDecayMatchesUnitary) {
  const auto s = load_setting("S1");
  const auto spec = SequenceSpec::make(12.0, 0.5, PulseKind::drag);
  GateOptions opts;
  opts.decay.rate_scale = 0.0;
  const auto u = evaluate_gate(spec, s, Model::unitary, opts);
  const auto l = evaluate_gate(spec, s, Model::lindblad, opts);
  EXPECT_NEAR(u.population_error, l.population_error, 1e-7);
  EXPECT_NEAR(u.bell_fidelity, l.bell_fidelity, 1e-7);
  EXPECT_NEAR(u.trace_distance, l.trace_distance, 1e-7);
}

TEST(Gate, PhaseExtractionNeedsOverlap) {
  std::array<Eigen::VectorXcd, 4> finals;
  for (auto& f : finals) f = Eigen::VectorXcd::Zero(100);
  const auto idx = computational_indices();
  for (int k = 0; k < 4; ++k) finals[k](idx[k]) = std::polar(1.0, 0.1 * k);
  const auto p = phases_from_basis(finals);
  EXPECT_NEAR(p.phi[3], 0.3, 1e-15);
  finals[1](idx[1]) = 0.3;
  EXPECT_THROW(phases_from_basis(finals), NumericalError);
}

TEST(Gate, RejectsMixedStateForUnitaryModel) {
  const auto s = load_setting("S1");
  const QuantumState rho(QuantumState::basis(Level::q0, Level::q0).density());
  EXPECT_THROW(run_sequence(SequenceSpec{}, s, rho, Model::unitary), ConfigError);
}
