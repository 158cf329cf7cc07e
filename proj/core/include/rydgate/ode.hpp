#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rydgate {

struct OdeTolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
  // Steps below min_step * max(1, |t|) abort the integration.
  double min_step = 1e-13;
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;

  OdeStats& operator+=(const OdeStats& o) {
    accepted += o.accepted;
    rejected += o.rejected;
    rhs_evals += o.rhs_evals;
    return *this;
  }
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt)>;

// Dormand-Prince 8(5,3) with the Hairer-Wanner step-size controller. Each
// call to integrate() lands exactly on t1, so callers can place breakpoints
// wherever the right-hand side is not smooth.
class Dop853 {
 public:
  explicit Dop853(OdeTolerances tol = {}) : tol_(tol) {}

  // Integrates y in place from t0 to t1 (t1 > t0). Throws NumericalError on
  // step-size underflow or when max_steps is exceeded.
  void integrate(const OdeRhs& f, double t0, double t1, Eigen::VectorXcd& y);

  // Fixed-step 8th-order integration with n steps; used for convergence
  // studies.
  void integrate_fixed(const OdeRhs& f, double t0, double t1, Eigen::VectorXcd& y, long n);

  const OdeStats& stats() const { return stats_; }
  const OdeTolerances& tolerances() const { return tol_; }

 private:
  // One step of size h from (t, y) with k1 = f(t, y). Fills y_new and returns
  // the scaled error estimate.
  double step(const OdeRhs& f, double t, double h, const Eigen::VectorXcd& y,
              Eigen::VectorXcd& y_new, bool estimate_error);
  double initial_step(const OdeRhs& f, double t0, double t1, const Eigen::VectorXcd& y);
  void resize(Eigen::Index n);

  OdeTolerances tol_;
  OdeStats stats_;
  double last_h_ = 0.0;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_, k11_, k12_, ytmp_, bsum_;
};

}  // namespace rydgate
