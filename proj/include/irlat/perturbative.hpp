#pragma once
// Closed-form asymptotic ground-state energies of the two competing phases
// and the level-crossing estimate of the first-order line.
//
//   ferro branch (small g):   E_F  = -J(N-1) - g^2 [ (N-2)/(d+4J) + 2/(d+2J) ]
//   dressed branch (large g): E_DF = -N g^2/d - J(N-1) e^{-4 a^2}
//                                    - (N-1)(J^2/d) P(a),   a = g/d
//
// with P the bounded series  P(a) = sum_{p>=1} e^{-8a^2} (8a^2)^p / (p! p).
// The crossing solves E_F(g) = E_DF(g) using the *leading* dressed branch
// (the -Ng^2/d - J(N-1)e^{-4a^2} envelope): the P-term is an O(J^2/d)
// correction that stays attractive at small g and never intersects the ferro
// branch, whereas the envelope crossing is the well-defined first-order
// estimate, strictly above sqrt(delta*J).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "irlat/errors.hpp"
#include "irlat/model.hpp"

namespace irlat {

inline double energy_ferro(const ModelParams& p) {
  p.validate();
  const double n = p.n_sites, d = p.delta, j = p.j_ising, g = p.g;
  return -j * (n - 1) -
         g * g * ((n - 2) / (d + 4 * j) + 2.0 / (d + 2 * j));
}

// P(a): positive, bounded by 1, asymptote 1/(8a^2) for large a.  Summed in
// log space (the prefactor e^{-8a^2} underflows beyond a ~ 9.4 while the
// Poisson bulk sits at p ~ 8a^2); the relative stop triggers only once the
// running term is past the mode and still needs to undercut the total.
inline double p_function(double alpha, double rel_tol = 1e-12) {
  const double lam = 8.0 * alpha * alpha;
  if (lam == 0.0) return 0.0;
  constexpr int kMaxTerms = 10000;
  const double llam = std::log(lam);
  double lsum = -std::numeric_limits<double>::infinity();
  for (int p = 1; p <= kMaxTerms; ++p) {
    const double lterm = -lam + p * llam - std::lgamma(double(p) + 1.0) -
                         std::log(double(p));
    lsum = std::max(lsum, lterm) +
           std::log1p(std::exp(-std::abs(lsum - lterm)));
    if (double(p) > lam && lterm < lsum + std::log(rel_tol)) break;
  }
  return std::exp(lsum);
}

// Envelope of the dressed branch: the two terms that dominate once a = g/d
// is large.  This is the curve the level-crossing estimate intersects with
// the ferro branch.
inline double energy_dressed_ferro_leading(const ModelParams& p) {
  p.validate();
  if (p.delta == 0.0)
    throw DivisionByZero("dressed-branch energy needs delta > 0");
  const double n = p.n_sites, d = p.delta, j = p.j_ising, g = p.g;
  const double a = g / d;
  return -n * g * g / d - j * (n - 1) * std::exp(-4.0 * a * a);
}

inline double energy_dressed_ferro(const ModelParams& p) {
  const double n = p.n_sites, d = p.delta, j = p.j_ising, g = p.g;
  const double lead = energy_dressed_ferro_leading(p);
  return lead - (n - 1) * (j * j / d) * p_function(g / d);
}

struct CrossingEstimate {
  enum class Status { kFound, kRequiresDeltaBelowJ, kNoRootInBracket };
  std::optional<double> g;
  Status status = Status::kNoRootInBracket;
  std::string message;
};

// Root of E_F(g) = E_DF_envelope(g) on (sqrt(delta*J), J), bisected to
// 1e-12 relative.  Full-chain energies (not per-site) so finite-N
// comparisons stay direct.
inline CrossingEstimate crossing_estimate(double delta, double j_ising,
                                          int n_sites) {
  CrossingEstimate out;
  if (!(delta > 0.0) || !(j_ising > 0.0) || n_sites < 2)
    throw InvalidParams("crossing_estimate: need delta > 0, J > 0, N >= 2");
  if (delta >= j_ising) {
    out.status = CrossingEstimate::Status::kRequiresDeltaBelowJ;
    out.message = "crossing estimate applies only for delta < J";
    return out;
  }
  auto split = [&](double g) {
    ModelParams p{n_sites, delta, g, j_ising, 2};
    return energy_ferro(p) - energy_dressed_ferro_leading(p);
  };
  double lo = std::sqrt(delta * j_ising) * (1.0 + 1e-12);
  double hi = j_ising;
  double flo = split(lo), fhi = split(hi);
  if (flo == 0.0) {
    out.g = lo;
    out.status = CrossingEstimate::Status::kFound;
    return out;
  }
  if (flo * fhi > 0.0) {
    out.status = CrossingEstimate::Status::kNoRootInBracket;
    out.message = "branch energies do not cross in (sqrt(delta J), J)";
    return out;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = split(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if (fm * flo < 0.0) hi = mid;
    else { lo = mid; flo = fm; }
  }
  out.g = 0.5 * (lo + hi);
  out.status = CrossingEstimate::Status::kFound;
  return out;
}

// Advisory regime checks; informational only, nothing is rejected.
inline std::vector<std::string> validity_warnings(const ModelParams& p) {
  std::vector<std::string> w;
  const double d = p.delta, j = p.j_ising, g = p.g;
  if (g > 0.2 * (d + 4 * j))
    w.push_back("ferro branch: g is not small against delta + 4J; "
                "second-order result untrustworthy");
  if (d > 0 && !(d >= 2 * j))
    w.push_back("dressed branch: delta is not large against J; "
                "neglected terms may matter");
  if (d > 0 && !(g * g >= 2 * j * d))
    w.push_back("dressed branch: g^2 is not large against J*delta; "
                "dressing expansion marginal");
  return w;
}

struct PerturbativeEnergies {
  double e_ferro = 0.0;
  double e_dressed = 0.0;
  double alpha = 0.0;
  double p_alpha = 0.0;
  std::optional<double> crossing_g;
};

inline PerturbativeEnergies perturbative_energies(const ModelParams& p) {
  PerturbativeEnergies out;
  out.e_ferro = energy_ferro(p);
  out.e_dressed = energy_dressed_ferro(p);
  out.alpha = p.delta > 0 ? p.g / p.delta : 0.0;
  out.p_alpha = p_function(out.alpha);
  if (p.delta < p.j_ising) {
    CrossingEstimate ce = crossing_estimate(p.delta, p.j_ising, p.n_sites);
    out.crossing_g = ce.g;
  }
  return out;
}

}  // namespace irlat
