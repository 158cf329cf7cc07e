#pragma once

#include <array>
#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

#include "rydgate/dynamics.hpp"
#include "rydgate/params.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate {

enum class Model { unitary, lindblad };

std::string_view to_string(Model model);
std::optional<Model> model_from_string(std::string_view s);

// Which detunings each segment's DRAG shape nulls. Unset entries use the
// defaults: {Delta'_1/2, Delta'_3/2} on the control pulses and {-B0} on the
// target pulse.
struct NullPlan {
  std::optional<std::vector<double>> control;
  std::optional<std::vector<double>> target;
};

// Control pi on [0, tau_c], target 2pi on [tau_c, tau_c + tau_t], control -pi
// on [tau_c + tau_t, t_g]. Segments abut.
struct SequenceSpec {
  double tau_t = 30.0;  // ns
  double tau_c = 15.0;  // ns
  std::array<PulseKind, 3> kinds{PulseKind::drag, PulseKind::drag, PulseKind::drag};
  double lambda_target = 0.0;   // rad/ns
  double lambda_control = 0.0;  // rad/ns
  std::array<double, 3> amp_scales{1.0, 1.0, 1.0};
  NullPlan null_plan;
  int control_order = 4;  // N for Gaussian control pulses
  int target_order = 2;   // N for the Gaussian target pulse
  double sigma_ratio = kDefaultSigmaRatio;

  double gate_time() const { return tau_t + 2.0 * tau_c; }

  static SequenceSpec make(double tau_t, double tau_c_ratio, PulseKind kind);
  void set_kind(PulseKind kind) { kinds = {kind, kind, kind}; }
};

// Calibrated pulses with areas pi, 2pi, -pi (before amplitude rescaling).
std::array<PulseShape, 3> build_sequence(const SequenceSpec& spec, const PhysicalSetting& setting);

// The three drive segments with their Hamiltonians.
Schedule build_schedule(const SequenceSpec& spec, const PhysicalSetting& setting);

struct GateOptions {
  PropagationOptions propagation;
  DecayOptions decay;
  // Threads used for independent basis-state propagations.
  int workers = 1;
};

QuantumState run_sequence(const SequenceSpec& spec, const PhysicalSetting& setting,
                          const QuantumState& initial, Model model, const GateOptions& options = {});

// Computational basis |00>, |01>, |10>, |11> (control first) as composite
// indices.
std::array<Eigen::Index, 4> computational_indices();

struct GatePhases {
  std::array<double, 4> phi{};  // phi_00, phi_01, phi_10, phi_11

  // phi_00 - phi_01 - phi_10 + phi_11, wrapped to (-pi, pi].
  double entangling() const;
};

// Final states of the four computational basis inputs under the unitary model.
std::array<Eigen::VectorXcd, 4> propagate_basis(const SequenceSpec& spec,
                                                const PhysicalSetting& setting,
                                                const GateOptions& options = {});

// arg <ij| psi_final^(ij)>. Throws NumericalError if any overlap is below 0.5.
GatePhases phases_from_basis(const std::array<Eigen::VectorXcd, 4>& finals);
GatePhases extract_phases(const SequenceSpec& spec, const PhysicalSetting& setting,
                          const GateOptions& options = {});

// Single-qubit pi/2 rotation R(h) = 1/sqrt(2) [[e^{i h00}, e^{i h01}], [e^{i h10}, e^{i h11}]].
Eigen::Matrix2cd pi_half_rotation(double h00, double h01, double h10, double h11);

// Two-qubit state prepared for the Bell test: (1 (x) R(0,0,0,pi)) (|00> + |10>)/sqrt(2),
// returned in the 4-dimensional computational basis.
Eigen::Vector4cd bell_test_input();
Eigen::Vector4cd bell_target();  // |Phi+> = (|00> + |11>)/sqrt(2)

struct WrappedState {
  Eigen::Matrix4cd rho;
  bool phase_warning = false;  // entangling phase far from pi
};

// Applies the ideal output frame (1 (x) R(pi, phi~, -phi~, 0)) with
// phi~ = phi_10 - phi_11, followed by the control-qubit phase that maps the
// ideal output onto |Phi+>.
WrappedState cnot_wrap(const Eigen::Matrix4cd& rho_q, const GatePhases& phases);

// 4x4 block of a composite density matrix on the computational subspace.
Eigen::Matrix4cd restrict_to_computational(const Eigen::MatrixXcd& rho);

// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for Hermitian PSD matrices.
double uhlmann_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
// 1/2 sum |eig(rho - sigma)|.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

struct GateMetrics {
  GatePhases phases;
  double entangling_phase = 0.0;
  double population_error = 0.0;
  double bell_fidelity = 0.0;
  double trace_distance = 0.0;
  bool phase_warning = false;
};

struct MetricSelection {
  bool population_error = true;
  bool bell = true;
};

// Evaluates all metrics with the fewest propagations: the unitary model
// needs only the four basis runs (the Bell input is their superposition);
// the Lindblad model adds one density-matrix run for the Bell state and four
// for the population error. Phases always come from the unitary model.
GateMetrics evaluate_gate(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                          const GateOptions& options = {}, MetricSelection select = {});

double population_error(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                        const GateOptions& options = {});
double bell_fidelity(const SequenceSpec& spec, const PhysicalSetting& setting, Model model,
                     const GateOptions& options = {});

}  // namespace rydgate
