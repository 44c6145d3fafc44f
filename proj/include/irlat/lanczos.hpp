#pragma once
// Lanczos eigensolver for real symmetric operators given as mat-vec
// callbacks.  Full reorthogonalization (the basis is small), deflation
// against already-converged vectors, deterministic seeded starts, and
// restarts from the best Ritz vector.  Shared by the dense-basis solver and
// the two-site MPS effective problem.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "irlat/errors.hpp"

namespace irlat {

struct LanczosOptions {
  int max_basis = 200;      // Krylov vectors kept per restart cycle
  int max_restarts = 200;
  double tol = 1e-10;       // residual target, relative to max(1, |E|)
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
  std::vector<double> residuals; // ||H v - E v|| actually achieved
};

namespace detail {

inline Eigen::VectorXd seeded_vector(std::int64_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v[i] = nd(rng);
  return v;
}

// Project out the span of `locked` columns, twice for numerical safety.
inline void deflate(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& locked) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : locked) w -= u.dot(w) * u;
}

}  // namespace detail

// Lowest k eigenpairs of a real symmetric operator.  `apply` must implement
// out = H * in for vectors of length dim.  Optional initial guesses are used
// for the matching eigenpair index when nonzero.
template <class MatVec>
EigenPairs lanczos_lowest(std::int64_t dim, MatVec&& apply, int k,
                          const LanczosOptions& opt = {},
                          const std::vector<Eigen::VectorXd>* guesses = nullptr) {
  if (k < 1) throw InvalidParams("lanczos: k must be >= 1");
  if (dim < 1) throw InvalidParams("lanczos: empty space");
  if (std::int64_t(k) > dim) throw InvalidParams("lanczos: k exceeds dimension");
  EigenPairs out;
  Eigen::VectorXd hv(dim);
  for (int e = 0; e < k; ++e) {
    Eigen::VectorXd v0;
    if (guesses && e < int(guesses->size()) && (*guesses)[e].size() == dim &&
        (*guesses)[e].norm() > 0.0)
      v0 = (*guesses)[e];
    else
      v0 = detail::seeded_vector(dim, opt.seed + 0x51ed270b * std::uint64_t(e + 1));
    detail::deflate(v0, out.vectors);
    if (v0.norm() < 1e-12)
      v0 = detail::seeded_vector(dim, opt.seed + 0xabcd1234 + e);
    detail::deflate(v0, out.vectors);
    v0.normalize();

    const int m_max = int(std::min<std::int64_t>(opt.max_basis, dim - e));
    Eigen::MatrixXd basis(dim, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    bool converged = false;
    double value = 0.0, resid = 0.0;
    Eigen::VectorXd vec;

    for (int restart = 0; restart < opt.max_restarts && !converged; ++restart) {
      basis.col(0) = v0;
      int m = 0;
      bool exhausted = false;
      for (m = 0; m < m_max; ++m) {
        apply(basis.col(m), hv);
        alpha[m] = basis.col(m).dot(hv);
        Eigen::VectorXd w = hv;
        detail::deflate(w, out.vectors);
        // full reorthogonalization, two classical Gram-Schmidt passes
        for (int pass = 0; pass < 2; ++pass)
          w -= basis.leftCols(m + 1) *
               (basis.leftCols(m + 1).transpose() * w);
        beta[m] = w.norm();
        if (!std::isfinite(alpha[m]) || !std::isfinite(beta[m]))
          throw NoConvergence("lanczos: non-finite Krylov coefficients");
        if (beta[m] < 1e-13) { // invariant subspace reached
          exhausted = true;
          ++m;
          break;
        }
        if (m >= 1) {
          // cheap Ritz-residual estimate beta_m * |bottom of Ritz vector|;
          // the explicit residual below still gates acceptance
          Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m + 1, m + 1);
          for (int i = 0; i <= m; ++i) {
            tri(i, i) = alpha[i];
            if (i + 1 <= m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
          }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> est(tri);
          const double scale = std::max(1.0, std::abs(est.eigenvalues()[0]));
          if (beta[m] * std::abs(est.eigenvectors()(m, 0)) <=
              0.25 * opt.tol * scale) {
            ++m;
            break;
          }
        }
        if (m + 1 < m_max) basis.col(m + 1) = w / beta[m];
        else { ++m; break; }
      }
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      value = es.eigenvalues()[0];
      vec = basis.leftCols(m) * es.eigenvectors().col(0);
      detail::deflate(vec, out.vectors);
      vec.normalize();
      apply(vec, hv);
      resid = (hv - value * vec).norm();
      if (resid <= opt.tol * std::max(1.0, std::abs(value))) converged = true;
      else if (exhausted && m < m_max) {
        // Exact invariant subspace of the deflated operator: accept.
        converged = resid <= 1e2 * opt.tol * std::max(1.0, std::abs(value));
        if (!converged) v0 = vec;
      } else v0 = vec;
    }
    if (!converged)
      throw NoConvergence("lanczos: eigenpair " + std::to_string(e) +
                          " residual " + std::to_string(resid));
    out.values.push_back(value);
    out.vectors.push_back(vec);
    out.residuals.push_back(resid);
  }
  return out;
}

}  // namespace irlat
