#include "rydgate/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydgate/errors.hpp"

namespace rydgate {

namespace {

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner, DOP853).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.333;
constexpr double kFacMax = 6.0;

}  // namespace

void Dop853::resize(Eigen::Index n) {
  for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &k8_, &k9_, &k10_, &k11_, &k12_,
                  &ytmp_, &bsum_}) {
    if (v->size() != n) v->resize(n);
  }
}

double Dop853::step(const OdeRhs& f, double t, double h, const Eigen::VectorXcd& y,
                    Eigen::VectorXcd& y_new, bool estimate_error) {
  ytmp_ = y + h * (a21 * k1_);
  f(t + c2 * h, ytmp_, k2_);
  ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
  f(t + c3 * h, ytmp_, k3_);
  ytmp_ = y + h * (a41 * k1_ + a43 * k3_);
  f(t + c4 * h, ytmp_, k4_);
  ytmp_ = y + h * (a51 * k1_ + a53 * k3_ + a54 * k4_);
  f(t + c5 * h, ytmp_, k5_);
  ytmp_ = y + h * (a61 * k1_ + a64 * k4_ + a65 * k5_);
  f(t + c6 * h, ytmp_, k6_);
  ytmp_ = y + h * (a71 * k1_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
  f(t + c7 * h, ytmp_, k7_);
  ytmp_ = y + h * (a81 * k1_ + a84 * k4_ + a85 * k5_ + a86 * k6_ + a87 * k7_);
  f(t + c8 * h, ytmp_, k8_);
  ytmp_ = y + h * (a91 * k1_ + a94 * k4_ + a95 * k5_ + a96 * k6_ + a97 * k7_ + a98 * k8_);
  f(t + c9 * h, ytmp_, k9_);
  ytmp_ = y + h * (a101 * k1_ + a104 * k4_ + a105 * k5_ + a106 * k6_ + a107 * k7_ + a108 * k8_ +
                   a109 * k9_);
  f(t + c10 * h, ytmp_, k10_);
  ytmp_ = y + h * (a111 * k1_ + a114 * k4_ + a115 * k5_ + a116 * k6_ + a117 * k7_ + a118 * k8_ +
                   a119 * k9_ + a1110 * k10_);
  f(t + c11 * h, ytmp_, k11_);
  ytmp_ = y + h * (a121 * k1_ + a124 * k4_ + a125 * k5_ + a126 * k6_ + a127 * k7_ + a128 * k8_ +
                   a129 * k9_ + a1210 * k10_ + a1211 * k11_);
  f(t + h, ytmp_, k12_);
  stats_.rhs_evals += 11;

  bsum_ = b1 * k1_ + b6 * k6_ + b7 * k7_ + b8 * k8_ + b9 * k9_ + b10 * k10_ + b11 * k11_ +
          b12 * k12_;
  y_new = y + h * bsum_;
  if (!estimate_error) return 0.0;

  double err5 = 0.0;
  double err3 = 0.0;
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sk = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const auto e3 = bsum_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k12_[i];
    const auto e5 = er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
                    er10 * k10_[i] + er11 * k11_[i] + er12 * k12_[i];
    err3 += std::norm(e3) / (sk * sk);
    err5 += std::norm(e5) / (sk * sk);
  }
  double deno = err5 + 0.01 * err3;
  if (deno <= 0.0) deno = 1.0;
  return std::abs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
}

double Dop853::initial_step(const OdeRhs& f, double t0, double t1, const Eigen::VectorXcd& y) {
  auto scaled_norm = [this, &y](const Eigen::VectorXcd& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sk = tol_.atol + tol_.rtol * std::abs(y[i]);
      s += std::norm(v[i]) / (sk * sk);
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  };
  const double span = t1 - t0;
  const double d0 = scaled_norm(y);
  const double d1 = scaled_norm(k1_);
  double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  ytmp_ = y + h0 * k1_;
  f(t0 + h0, ytmp_, k2_);
  ++stats_.rhs_evals;
  const double d2 = scaled_norm(k2_ - k1_) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 8.0);
  return std::min({100.0 * h0, h1, span});
}

void Dop853::integrate(const OdeRhs& f, double t0, double t1, Eigen::VectorXcd& y) {
  if (!(t1 > t0)) return;
  resize(y.size());
  f(t0, y, k1_);
  ++stats_.rhs_evals;
  double h = last_h_ > 0.0 ? std::min(last_h_, t1 - t0) : initial_step(f, t0, t1, y);
  double t = t0;
  bool last_rejected = false;
  long steps = 0;
  Eigen::VectorXcd y_new(y.size());

  while (t < t1) {
    if (++steps > tol_.max_steps) {
      std::ostringstream msg;
      msg << "integration exceeded " << tol_.max_steps << " steps at t = " << t << " ns";
      throw NumericalError(msg.str());
    }
    if (h < tol_.min_step * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t << " ns (h = " << h << ")";
      throw NumericalError(msg.str());
    }
    bool final_step = false;
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    const double err = step(f, t, h, y, y_new, true);
    if (!std::isfinite(err)) {
      h *= 0.1;
      ++stats_.rejected;
      last_rejected = true;
      continue;
    }
    // Controller exponent 1/8 (no PI term, beta = 0).
    const double fac11 = std::pow(err, 0.125);
    double fac = std::clamp(fac11 / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
    double h_new = h / fac;
    if (err <= 1.0) {
      ++stats_.accepted;
      y.swap(y_new);
      t = final_step ? t1 : t + h;
      if (t < t1) {
        f(t, y, k1_);
        ++stats_.rhs_evals;
      }
      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      if (!final_step) last_h_ = h_new;
      h = h_new;
    } else {
      h_new = h / std::min(1.0 / kFacMin, fac11 / kSafe);
      ++stats_.rejected;
      last_rejected = true;
      h = h_new;
    }
  }
}

void Dop853::integrate_fixed(const OdeRhs& f, double t0, double t1, Eigen::VectorXcd& y, long n) {
  if (n <= 0) throw NumericalError("fixed-step integration needs at least one step");
  resize(y.size());
  const double h = (t1 - t0) / static_cast<double>(n);
  Eigen::VectorXcd y_new(y.size());
  for (long i = 0; i < n; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    f(t, y, k1_);
    ++stats_.rhs_evals;
    step(f, t, h, y, y_new, false);
    y.swap(y_new);
    ++stats_.accepted;
  }
}

}  // namespace rydgate
