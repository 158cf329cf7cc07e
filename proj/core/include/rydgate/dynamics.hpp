#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "rydgate/atom.hpp"
#include "rydgate/ode.hpp"
#include "rydgate/params.hpp"

namespace rydgate {

// Pure state vector or density matrix on the composite space.
class QuantumState {
 public:
  QuantumState() = default;
  explicit QuantumState(Eigen::VectorXcd psi) : data_(std::move(psi)) {}
  explicit QuantumState(Eigen::MatrixXcd rho) : data_(std::move(rho)) {}

  static QuantumState basis(Level control, Level target);

  bool is_pure() const { return std::holds_alternative<Eigen::VectorXcd>(data_); }
  const Eigen::VectorXcd& vector() const { return std::get<Eigen::VectorXcd>(data_); }
  const Eigen::MatrixXcd& matrix() const { return std::get<Eigen::MatrixXcd>(data_); }
  Eigen::Index dimension() const;

  // |psi><psi| for pure states, the matrix itself otherwise.
  Eigen::MatrixXcd density() const;
  // Diagonal of the density matrix.
  Eigen::VectorXd populations() const;
  double trace() const;

 private:
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

// Envelope as a function of the segment-local time.
using Envelope = std::function<double(double)>;

// One interval of piecewise-smooth drive. The integrator treats segment
// boundaries as hard breakpoints.
struct DriveSegment {
  double start = 0.0;
  double duration = 0.0;
  std::shared_ptr<const CompositeHamiltonian> hamiltonian;
  Envelope control;  // empty = off
  Envelope target;   // empty = off
};

struct Schedule {
  std::vector<DriveSegment> segments;
  double end_time() const;
};

struct CollapseOperator {
  Level level = Level::r_target;
  double rate = 0.0;  // 1/ns
  SparseOperator op;  // c_r (x) 1 + 1 (x) c_r
};

struct CollapseSet {
  std::vector<CollapseOperator> operators;
};

struct DecayOptions {
  // Multiplies every decay rate (e.g. 0.01 for a cryogenic environment).
  double rate_scale = 1.0;
  // Use the branch fractions directly as amplitudes instead of their square
  // roots. The total decay rate is then not Gamma; sensitivity studies only.
  bool literal_branch_amplitudes = false;
};

// One composite collapse operator per Rydberg level:
// c_r = sqrt(Gamma_r) (sqrt(p_g)|g><r| + sqrt(p_0)|0><r| + sqrt(p_1)|1><r|).
CollapseSet build_collapse_set(const PhysicalSetting& setting, const AtomBasis& basis,
                               const DecayOptions& options = {});

// Per-atom level populations sampled during propagation.
struct TrajectorySample {
  double t = 0.0;
  std::array<double, kLevelCount> control{};
  std::array<double, kLevelCount> target{};
};

struct PropagationOptions {
  OdeTolerances tolerances;
  // Trajectory sampling stride in ns; 0 disables sampling.
  double sample_stride = 0.0;
};

struct PropagationResult {
  QuantumState state;
  OdeStats stats;
  std::vector<TrajectorySample> trajectory;
};

// i d psi/dt = H(t) psi. No renormalization is applied.
PropagationResult propagate_schrodinger(const Schedule& schedule, const Eigen::VectorXcd& psi0,
                                        const PropagationOptions& options = {});

// d rho/dt = -i[H, rho] + sum_r (C rho C^+ - 1/2 {C^+ C, rho}).
PropagationResult propagate_lindblad(const Schedule& schedule, const CollapseSet& collapse,
                                     const Eigen::MatrixXcd& rho0,
                                     const PropagationOptions& options = {});

// Reduced single-atom populations of a composite density diagonal.
TrajectorySample reduced_populations(double t, const Eigen::VectorXd& composite_populations);

}  // namespace rydgate
