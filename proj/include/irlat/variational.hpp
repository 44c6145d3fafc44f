#pragma once
// Mean-field solvers for the two limits of the boson timescale:
//
//  * Born-Oppenheimer (slow bosons): freeze a uniform displacement alpha,
//    leaving a transverse-field Ising chain in field h = 2*alpha*g whose
//    exact per-site energy is an elliptic integral; minimize
//        E_BO/N (alpha) = delta*alpha^2 + e_tfim(2*alpha*g, J).
//    The alpha->0 curvature is 2(delta - g^2/J), so the displaced solution
//    turns on at the criticality condition g^2 = delta*J.
//
//  * Silbey-Harris (fast bosons): variationally scaled displacement eta,
//        E_SH(eta) = N (g^2/d)(eta^2 - 2 eta) - J(N-1) e^{-4 eta^2 (g/d)^2},
//    minimized over eta in [0, 1.2]; the basin swap is the first-order
//    signature at small delta.
//
// Optimizers are deterministic (dense scan + golden-section refinement): the
// discontinuity locations must be reproducible.

#include <cmath>

#include "irlat/errors.hpp"
#include "irlat/model.hpp"

namespace irlat {

namespace detail {

// Golden-section minimum of f on [a, b] to absolute tolerance xtol.
template <class F>
double golden_min(F&& f, double a, double b, double xtol = 1e-13) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Thermodynamic-limit transverse-field Ising ground energy per site,
// -(2/pi)(h+J) E[m] with parameter m = 4hJ/(h+J)^2 (E in the parameter
// convention, i.e. argument m = k^2).
inline double tfim_energy_per_site(double h, double j_ising) {
  if (h < 0.0) throw InvalidParams("tfim energy: h must be >= 0");
  if (!(j_ising > 0.0)) throw InvalidParams("tfim energy: J must be > 0");
  if (h == 0.0) return -j_ising;
  const double s = h + j_ising;
  double m = 4.0 * h * j_ising / (s * s);
  if (m > 1.0) m = 1.0; // guard rounding at h = J
  return -(2.0 / M_PI) * s * std::comp_ellint_2(std::sqrt(m));
}

// Even in alpha; callers pass alpha >= 0 (negative solutions are the 2^N
// sign copies of the same energy).
inline double bo_energy_per_site(double alpha, const ModelParams& p) {
  p.validate();
  const double a = std::abs(alpha);
  return p.delta * a * a + tfim_energy_per_site(2.0 * a * p.g, p.j_ising);
}

struct BOResult {
  double alpha0 = 0.0;
  double energy_per_site = 0.0;
  double n = 0.0;        // alpha0^2
  double critical_g = 0.0; // sqrt(delta*J)
};

// The displaced branch becomes the ground solution exactly at the curvature
// flip g^2 = delta*J; below it the undisplaced alpha = 0 solution is
// reported.  Above, the minimum over alpha in (0, 4g/delta + 1] is found by
// a 2000-point coarse scan plus golden-section refinement.
inline BOResult minimize_bo(const ModelParams& p) {
  p.validate();
  if (!(p.j_ising > 0.0)) throw InvalidParams("minimize_bo: J must be > 0");
  BOResult r;
  r.critical_g = std::sqrt(p.delta * p.j_ising);
  if (p.g * p.g < p.delta * p.j_ising || p.g == 0.0) {
    r.alpha0 = 0.0;
    r.energy_per_site = -p.j_ising;
    r.n = 0.0;
    return r;
  }
  const double hi = 4.0 * p.g / std::max(p.delta, 1e-12) + 1.0;
  const int kCoarse = 2000;
  double best_a = 0.0, best_e = bo_energy_per_site(0.0, p);
  for (int i = 1; i <= kCoarse; ++i) {
    const double a = hi * double(i) / kCoarse;
    const double e = bo_energy_per_site(a, p);
    if (e < best_e) { best_e = e; best_a = a; }
  }
  if (best_a > 0.0) {
    const double lo = std::max(0.0, best_a - hi / kCoarse);
    const double up = std::min(hi, best_a + hi / kCoarse);
    best_a = detail::golden_min(
        [&](double a) { return bo_energy_per_site(a, p); }, lo, up);
    best_e = bo_energy_per_site(best_a, p);
  }
  r.alpha0 = best_a;
  r.energy_per_site = best_e;
  r.n = best_a * best_a;
  return r;
}

inline double sh_energy(double eta, const ModelParams& p) {
  p.validate();
  if (p.delta == 0.0) throw DivisionByZero("sh_energy needs delta > 0");
  const double n = p.n_sites, d = p.delta, j = p.j_ising, g = p.g;
  const double k = eta * g / d;
  return n * (g * g / d) * (eta * eta - 2.0 * eta) -
         j * (n - 1) * std::exp(-4.0 * k * k);
}

struct SHResult {
  double eta0 = 0.0;
  double energy = 0.0;
  double n = 0.0; // (eta0 * g / delta)^2
};

inline SHResult minimize_sh(const ModelParams& p) {
  p.validate();
  if (p.delta == 0.0) throw DivisionByZero("minimize_sh needs delta > 0");
  SHResult r;
  if (p.j_ising == 0.0) { // stationarity of eta^2 - 2 eta alone
    r.eta0 = 1.0;
    r.energy = sh_energy(1.0, p);
    r.n = (p.g / p.delta) * (p.g / p.delta);
    return r;
  }
  const double hi = 1.2;
  const int kDense = 10000;
  double best_eta = 0.0, best_e = sh_energy(0.0, p);
  for (int i = 1; i <= kDense; ++i) {
    const double eta = hi * double(i) / kDense;
    const double e = sh_energy(eta, p);
    if (e < best_e) { best_e = e; best_eta = eta; }
  }
  const double lo = std::max(0.0, best_eta - hi / kDense);
  const double up = std::min(hi, best_eta + hi / kDense);
  best_eta = detail::golden_min([&](double eta) { return sh_energy(eta, p); },
                                lo, up);
  best_e = sh_energy(best_eta, p);
  if (sh_energy(0.0, p) <= best_e) { best_eta = 0.0; best_e = sh_energy(0.0, p); }
  r.eta0 = best_eta;
  r.energy = best_e;
  r.n = (best_eta * p.g / p.delta) * (best_eta * p.g / p.delta);
  return r;
}

}  // namespace irlat
