#include "rydgate/atom.hpp"

#include <cmath>

#include "rydgate/errors.hpp"

namespace rydgate {

AtomBasis build_basis(const PhysicalSetting& setting) {
  setting.validate();
  std::array<AtomLevel, kLevelCount> levels{};
  for (Level l : kAllLevels) levels[index_of(l)].label = l;

  auto weight = [&](Level l) {
    const int nr = setting.principal_number(*manifold_of(l));
    return std::pow(static_cast<double>(setting.n) / nr, 1.5);
  };
  auto rydberg = [&](Level l, double detuning, Level source, double extra_factor) {
    auto& level = levels[index_of(l)];
    level.rot_detuning = detuning;
    level.rabi_weight = weight(l) * extra_factor;
    level.source = source;
    level.decay_rate = setting.decay_rate(l);
  };

  const double ph = setting.p_half_suppression;
  rydberg(Level::r_target, 0.0, Level::q1, 1.0);
  rydberg(Level::r_plus, setting.delta_plus, Level::q1, 1.0);
  rydberg(Level::r_minus, setting.delta_minus, Level::q1, 1.0);
  rydberg(Level::r_p1h, setting.delta_p1_half, Level::q0, ph);
  rydberg(Level::r_p3h, setting.delta_p3_half, Level::q0, 1.0);
  rydberg(Level::r_pp1h, setting.delta_pp1_half, Level::q0, ph);
  rydberg(Level::r_pp3h, setting.delta_pp3_half, Level::q0, 1.0);
  return AtomBasis(levels);
}

void SparseOperator::add(int row, int col, double value) {
  if (row < 0 || col < 0 || row >= dim_ || col >= dim_) {
    throw ConfigError("sparse operator index out of range");
  }
  entries_.push_back({row, col, value});
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& e : entries_) m(e.row, e.col) += e.value;
  return m;
}

CompositeHamiltonian build_composite(const PhysicalSetting& setting, const AtomBasis& control,
                                     const AtomBasis& target, double lambda_control,
                                     double lambda_target) {
  if (!(control == target)) {
    throw ConfigError("control and target bases must come from the same setting");
  }
  if (!std::isfinite(lambda_control) || !std::isfinite(lambda_target)) {
    throw ConfigError("drive detunings must be finite");
  }
  const int dim = static_cast<int>(kCompositeDim);
  CompositeHamiltonian h;
  h.lambda_control = lambda_control;
  h.lambda_target = lambda_target;
  h.drift = Eigen::VectorXd::Zero(dim);
  h.drive_control = SparseOperator(dim);
  h.drive_target = SparseOperator(dim);

  auto shifted = [](const AtomLevel& level, double lambda) {
    return is_rydberg(level.label) ? level.rot_detuning - lambda : level.rot_detuning;
  };

  for (Level lc : kAllLevels) {
    for (Level lt : kAllLevels) {
      const auto idx = composite_index(lc, lt);
      double d = shifted(control[lc], lambda_control) + shifted(target[lt], lambda_target);
      if (is_rydberg(lc) && is_rydberg(lt)) {
        d += setting.relative_blockade(*manifold_of(lc), *manifold_of(lt)) * setting.b0;
      }
      h.drift(static_cast<Eigen::Index>(idx)) = d;
    }
  }

  // Drive patterns: w/2 between source and Rydberg level, tensored with the
  // identity on the other atom.
  for (const AtomLevel& level : control.levels()) {
    if (!level.source || level.rabi_weight == 0.0) continue;
    const double c = 0.5 * level.rabi_weight;
    for (Level other : kAllLevels) {
      const int r = static_cast<int>(composite_index(level.label, other));
      const int s = static_cast<int>(composite_index(*level.source, other));
      h.drive_control.add(r, s, c);
      h.drive_control.add(s, r, c);
    }
  }
  for (const AtomLevel& level : target.levels()) {
    if (!level.source || level.rabi_weight == 0.0) continue;
    const double c = 0.5 * level.rabi_weight;
    for (Level other : kAllLevels) {
      const int r = static_cast<int>(composite_index(other, level.label));
      const int s = static_cast<int>(composite_index(other, *level.source));
      h.drive_target.add(r, s, c);
      h.drive_target.add(s, r, c);
    }
  }
  return h;
}

Eigen::MatrixXcd hamiltonian_at(const CompositeHamiltonian& h, double eps_control,
                                double eps_target) {
  Eigen::MatrixXd m = h.drift.asDiagonal();
  if (eps_control != 0.0) m += eps_control * h.drive_control.to_dense();
  if (eps_target != 0.0) m += eps_target * h.drive_target.to_dense();
  return m.cast<std::complex<double>>();
}

}  // namespace rydgate
