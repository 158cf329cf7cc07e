#pragma once

#include <array>
#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "rydgate/levels.hpp"
#include "rydgate/params.hpp"

namespace rydgate {

struct AtomLevel {
  Level label = Level::g;
  double rot_detuning = 0.0;  // rad/ns, in the frame of the undetuned drive
  double rabi_weight = 0.0;
  std::optional<Level> source;  // qubit level the drive couples this level to
  double decay_rate = 0.0;      // 1/ns

  bool operator==(const AtomLevel&) const = default;
};

class AtomBasis {
 public:
  AtomBasis() = default;
  explicit AtomBasis(std::array<AtomLevel, kLevelCount> levels) : levels_(levels) {}

  const AtomLevel& operator[](Level l) const { return levels_[index_of(l)]; }
  AtomLevel& operator[](Level l) { return levels_[index_of(l)]; }
  const std::array<AtomLevel, kLevelCount>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }

  bool operator==(const AtomBasis&) const = default;

 private:
  std::array<AtomLevel, kLevelCount> levels_{};
};

// Rotating-frame level structure of one atom: detunings from the setting,
// Rabi weights (n / n_r)^(3/2) with the p1/2 suppression factor, and decay
// rates from the setting's lifetimes.
AtomBasis build_basis(const PhysicalSetting& setting);

// Real sparse operator on the composite space, stored as (row, col, value)
// triplets.
struct SparseEntry {
  int row;
  int col;
  double value;
};

class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(int dim) : dim_(dim) {}

  void add(int row, int col, double value);
  int dim() const { return dim_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  Eigen::MatrixXd to_dense() const;

 private:
  int dim_ = 0;
  std::vector<SparseEntry> entries_;
};

// H(t) = drift + eps_c(t) * drive_control + eps_t(t) * drive_target on the
// 100-dimensional |control, target> space.
struct CompositeHamiltonian {
  int dimension = static_cast<int>(kCompositeDim);
  Eigen::VectorXd drift;  // diagonal (rad/ns)
  SparseOperator drive_control;
  SparseOperator drive_target;
  double lambda_control = 0.0;
  double lambda_target = 0.0;
};

// Assembles the composite Hamiltonian under the rotating-wave approximation:
// each drive couples its source qubit level to a Rydberg level with strength
// w / 2 per unit envelope. Rydberg levels of an atom driven with constant
// detuning Lambda are shifted by -Lambda. Doubly-Rydberg states carry
// b(r_i, r_j) * B0.
CompositeHamiltonian build_composite(const PhysicalSetting& setting, const AtomBasis& control,
                                     const AtomBasis& target, double lambda_control,
                                     double lambda_target);

Eigen::MatrixXcd hamiltonian_at(const CompositeHamiltonian& h, double eps_control,
                                double eps_target);

}  // namespace rydgate
