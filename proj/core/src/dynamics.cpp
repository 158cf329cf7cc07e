#include "rydgate/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "rydgate/errors.hpp"

namespace rydgate {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
const Eigen::Index kDim = static_cast<Eigen::Index>(kCompositeDim);

void check_schedule(const Schedule& schedule) {
  double t = schedule.segments.empty() ? 0.0 : schedule.segments.front().start;
  for (const auto& seg : schedule.segments) {
    if (!seg.hamiltonian) throw ConfigError("drive segment without Hamiltonian");
    if (!(seg.duration > 0.0)) throw ConfigError("drive segment with non-positive duration");
    if (std::abs(seg.start - t) > 1e-12 * std::max(1.0, t)) {
      throw ConfigError("drive segments must abut without gaps");
    }
    t = seg.start + seg.duration;
  }
}

// Breakpoints inside one segment: the segment end plus trajectory samples.
std::vector<double> segment_stops(const DriveSegment& seg, double stride) {
  std::vector<double> stops;
  const double end = seg.start + seg.duration;
  if (stride > 0.0) {
    const double first = std::ceil(seg.start / stride + 1e-9) * stride;
    for (double t = first; t < end - 1e-9; t += stride) stops.push_back(t);
  }
  stops.push_back(end);
  return stops;
}

struct EnvelopeValues {
  double control;
  double target;
};

EnvelopeValues evaluate(const DriveSegment& seg, double t) {
  const double local = t - seg.start;
  return {seg.control ? seg.control(local) : 0.0, seg.target ? seg.target(local) : 0.0};
}

void check_norm(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NumericalError(std::string("propagation produced a non-finite ") + what);
  }
}

}  // namespace

QuantumState QuantumState::basis(Level control, Level target) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(kDim);
  psi(static_cast<Eigen::Index>(composite_index(control, target))) = 1.0;
  return QuantumState(std::move(psi));
}

Eigen::Index QuantumState::dimension() const {
  return is_pure() ? vector().size() : matrix().rows();
}

Eigen::MatrixXcd QuantumState::density() const {
  if (is_pure()) return vector() * vector().adjoint();
  return matrix();
}

Eigen::VectorXd QuantumState::populations() const {
  if (is_pure()) return vector().cwiseAbs2();
  return matrix().diagonal().real();
}

double QuantumState::trace() const { return populations().sum(); }

double Schedule::end_time() const {
  return segments.empty() ? 0.0 : segments.back().start + segments.back().duration;
}

CollapseSet build_collapse_set(const PhysicalSetting& setting, const AtomBasis& basis,
                               const DecayOptions& options) {
  if (!(options.rate_scale >= 0.0)) throw ConfigError("decay rate scale must be non-negative");
  CollapseSet set;
  const auto branch = [&](double p) {
    return options.literal_branch_amplitudes ? p : std::sqrt(p);
  };
  const std::pair<Level, double> channels[] = {{Level::g, branch(setting.decay_branch_g)},
                                               {Level::q0, branch(setting.decay_branch_0)},
                                               {Level::q1, branch(setting.decay_branch_1)}};
  for (Level r : kRydbergLevels) {
    const double rate = basis[r].decay_rate * options.rate_scale;
    CollapseOperator c;
    c.level = r;
    c.rate = rate;
    c.op = SparseOperator(static_cast<int>(kCompositeDim));
    if (rate > 0.0) {
      const double amp = std::sqrt(rate);
      for (const auto& [dest, weight] : channels) {
        if (weight == 0.0) continue;
        for (Level other : kAllLevels) {
          c.op.add(static_cast<int>(composite_index(dest, other)),
                   static_cast<int>(composite_index(r, other)), amp * weight);
          c.op.add(static_cast<int>(composite_index(other, dest)),
                   static_cast<int>(composite_index(other, r)), amp * weight);
        }
      }
    }
    set.operators.push_back(std::move(c));
  }
  return set;
}

TrajectorySample reduced_populations(double t, const Eigen::VectorXd& pops) {
  TrajectorySample s;
  s.t = t;
  for (std::size_t c = 0; c < kLevelCount; ++c) {
    for (std::size_t g = 0; g < kLevelCount; ++g) {
      const double p = pops(static_cast<Eigen::Index>(c * kLevelCount + g));
      s.control[c] += p;
      s.target[g] += p;
    }
  }
  return s;
}

PropagationResult propagate_schrodinger(const Schedule& schedule, const Eigen::VectorXcd& psi0,
                                        const PropagationOptions& options) {
  check_schedule(schedule);
  if (psi0.size() != kDim) throw ConfigError("initial state has wrong dimension");
  Dop853 solver(options.tolerances);
  Eigen::VectorXcd psi = psi0;
  PropagationResult result;
  if (options.sample_stride > 0.0) {
    const double t0 = schedule.segments.empty() ? 0.0 : schedule.segments.front().start;
    result.trajectory.push_back(reduced_populations(t0, psi.cwiseAbs2()));
  }

  for (const auto& seg : schedule.segments) {
    const auto& h = *seg.hamiltonian;
    const Eigen::VectorXd& drift = h.drift;
    OdeRhs rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
      const auto eps = evaluate(seg, t);
      Eigen::VectorXcd hy = drift.cwiseProduct(y);
      if (eps.control != 0.0) {
        for (const auto& e : h.drive_control.entries()) hy[e.row] += (eps.control * e.value) * y[e.col];
      }
      if (eps.target != 0.0) {
        for (const auto& e : h.drive_target.entries()) hy[e.row] += (eps.target * e.value) * y[e.col];
      }
      dy = -kI * hy;
    };
    double t = seg.start;
    for (double stop : segment_stops(seg, options.sample_stride)) {
      solver.integrate(rhs, t, stop, psi);
      t = stop;
      if (options.sample_stride > 0.0) {
        result.trajectory.push_back(reduced_populations(t, psi.cwiseAbs2()));
      }
    }
    check_norm(psi.squaredNorm(), "state norm");
  }
  result.state = QuantumState(std::move(psi));
  result.stats = solver.stats();
  return result;
}

namespace {

// Precomputed pieces of the Lindblad generator that do not depend on time.
struct LindbladKernel {
  Eigen::VectorXcd diag;             // drift + (i/2) diag(K)
  std::vector<SparseEntry> k_offdiag;  // off-diagonal part of K
  const CollapseSet* collapse = nullptr;
  bool dissipative = false;
};

LindbladKernel make_kernel(const CompositeHamiltonian& h, const CollapseSet& collapse) {
  LindbladKernel k;
  k.collapse = &collapse;
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(kDim, kDim);
  for (const auto& c : collapse.operators) {
    if (c.op.nonzeros() == 0) continue;
    k.dissipative = true;
    const Eigen::MatrixXd dense = c.op.to_dense();
    kmat += dense.transpose() * dense;
  }
  k.diag = h.drift.cast<std::complex<double>>();
  for (Eigen::Index i = 0; i < kDim; ++i) k.diag(i) += 0.5 * kI * kmat(i, i);
  for (Eigen::Index j = 0; j < kDim; ++j) {
    for (Eigen::Index i = 0; i < kDim; ++i) {
      if (i != j && kmat(i, j) != 0.0) {
        k.k_offdiag.push_back({static_cast<int>(i), static_cast<int>(j), kmat(i, j)});
      }
    }
  }
  return k;
}

}  // namespace

PropagationResult propagate_lindblad(const Schedule& schedule, const CollapseSet& collapse,
                                     const Eigen::MatrixXcd& rho0,
                                     const PropagationOptions& options) {
  check_schedule(schedule);
  if (rho0.rows() != kDim || rho0.cols() != kDim) {
    throw ConfigError("initial density matrix has wrong dimension");
  }
  Dop853 solver(options.tolerances);
  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), kDim * kDim);
  PropagationResult result;
  auto sample = [&](double t) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), kDim, kDim);
    result.trajectory.push_back(reduced_populations(t, rho.diagonal().real()));
  };
  if (options.sample_stride > 0.0) {
    sample(schedule.segments.empty() ? 0.0 : schedule.segments.front().start);
  }

  Eigen::MatrixXcd p(kDim, kDim);
  Eigen::MatrixXcd x(kDim, kDim);
  Eigen::MatrixXcd jump(kDim, kDim);

  for (const auto& seg : schedule.segments) {
    const auto& h = *seg.hamiltonian;
    const LindbladKernel kernel = make_kernel(h, collapse);
    OdeRhs rhs = [&](double t, const Eigen::VectorXcd& yv, Eigen::VectorXcd& dyv) {
      const auto eps = evaluate(seg, t);
      Eigen::Map<const Eigen::MatrixXcd> rho(yv.data(), kDim, kDim);
      // P = rho * Heff^+, Heff^+ = H + (i/2) K (all operators real symmetric).
      p.noalias() = rho * kernel.diag.asDiagonal();
      auto accumulate = [&](const std::vector<SparseEntry>& entries, std::complex<double> scale) {
        for (const auto& e : entries) p.col(e.col) += (scale * e.value) * rho.col(e.row);
      };
      if (eps.control != 0.0) accumulate(h.drive_control.entries(), eps.control);
      if (eps.target != 0.0) accumulate(h.drive_target.entries(), eps.target);
      if (!kernel.k_offdiag.empty()) accumulate(kernel.k_offdiag, 0.5 * kI);

      dyv.resize(kDim * kDim);
      Eigen::Map<Eigen::MatrixXcd> drho(dyv.data(), kDim, kDim);
      drho.noalias() = kI * (p - p.adjoint());
      if (kernel.dissipative) {
        jump.setZero();
        for (const auto& c : kernel.collapse->operators) {
          const auto& entries = c.op.entries();
          if (entries.empty()) continue;
          // x = rho C^T, then jump += C x.
          x.setZero();
          for (const auto& e : entries) x.col(e.row) += e.value * rho.col(e.col);
          for (Eigen::Index k = 0; k < kDim; ++k) {
            auto out = jump.col(k);
            auto in = x.col(k);
            for (const auto& e : entries) out(e.row) += e.value * in(e.col);
          }
        }
        drho += 0.5 * (jump + jump.adjoint());
      }
    };
    double t = seg.start;
    for (double stop : segment_stops(seg, options.sample_stride)) {
      solver.integrate(rhs, t, stop, y);
      t = stop;
      if (options.sample_stride > 0.0) sample(t);
    }
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), kDim, kDim);
    const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    check_norm(asym, "density matrix");
    if (asym > 1e-8) {
      std::ostringstream msg;
      msg << "density matrix lost hermiticity (max |rho - rho^+| = " << asym << ") at t = " << t
          << " ns";
      throw NumericalError(msg.str());
    }
  }
  result.state = QuantumState(Eigen::MatrixXcd(Eigen::Map<const Eigen::MatrixXcd>(y.data(), kDim, kDim)));
  result.stats = solver.stats();
  return result;
}

}  // namespace rydgate
