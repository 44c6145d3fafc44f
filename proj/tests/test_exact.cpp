// Small-chain eigensolves, symmetry-resolved representatives, observables.
#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include <Eigen/Dense>

#include "irlat/exact.hpp"
#include "irlat/model.hpp"

using namespace irlat;

namespace {

Eigen::MatrixXd tfim_dense(int n, double h, double j) {
  // static transverse field control: -h sum sx - J sum szsz on spins only
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  auto lift = [&](int site, const Eigen::MatrixXcd& blk) {
    Eigen::MatrixXcd cur(1, 1);
    cur(0, 0) = 1.0;
    for (int k = 1; k <= n; ++k) cur = kron_dense(cur, k == site ? blk : id2);
    return cur;
  };
  Eigen::MatrixXcd ham = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  for (int s = 1; s <= n; ++s) ham -= h * lift(s, pauli_x());
  for (int s = 1; s < n; ++s)
    ham -= j * lift(s, pauli_z()) * lift(s + 1, pauli_z());
  return ham.real();
}

}  // namespace

TEST_CASE("decoupled chain yields the exact two-fold ground pair") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.0;
  p.n_fock = 2;
  GroundSpace gs = ground_space(p, 2);
  REQUIRE(gs.energies.size() == 2);
  REQUIRE(gs.energies[0] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(gs.energies[1] == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(gs.energies[0] <= gs.energies[1]);
  for (std::size_t i = 0; i < gs.energies.size(); ++i)
    REQUIRE(gs.residuals[i] <= 1e-9 * std::max(1.0, std::abs(gs.energies[i])));
}

TEST_CASE("eigenpair count is validated") {
  ModelParams p;
  p.n_sites = 2;
  p.n_fock = 2;
  REQUIRE_THROWS_AS(ground_space(p, 0), InvalidParams);
  REQUIRE_THROWS_AS(ground_space(p, 17), InvalidParams);
}

TEST_CASE("iterative and dense eigensolvers agree") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.4;
  p.n_fock = 4;
  GroundSpace dense = ground_space(p, 2); // dim 64 < default dense cutoff
  ExactOptions force_iterative;
  force_iterative.dense_cutoff = 1;
  GroundSpace iter = ground_space(p, 2, force_iterative);
  for (int e = 0; e < 2; ++e) {
    REQUIRE(std::abs(dense.energies[e] - iter.energies[e]) <= 1e-9);
    REQUIRE(iter.residuals[e] <=
            1e-9 * std::max(1.0, std::abs(iter.energies[e])));
  }
}

TEST_CASE("weak-coupling ground energy matches the frozen reference") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.05;
  p.n_fock = 6;
  GroundSpace gs = ground_space(p, 1);
  REQUIRE(std::abs(gs.energies[0] - (-1.0016685214)) <= 1e-9);
}

TEST_CASE("ground degeneracy survives at finite coupling") {
  ModelParams p;
  p.n_sites = 3;
  p.delta = 1.0;
  p.g = 0.3;
  p.n_fock = 6;
  REQUIRE(degeneracy_gap(p) <= 1e-9);
  GroundSpace gs = ground_space(p, 3);
  REQUIRE(gs.energies[2] - gs.energies[0] > 1e-3); // pair, not a triplet
}

TEST_CASE("decoupled chain degeneracy gap is numerically zero") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.0;
  p.n_fock = 2;
  REQUIRE(degeneracy_gap(p) <= 1e-12);
}

TEST_CASE("static-field control opens a gap where the lattice stays degenerate") {
  // Replace the oscillator coupling by a static transverse field of the same
  // strength: the three-site control has a gap far above the lattice's.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tfim_dense(3, 0.3, 1.0));
  const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
  REQUIRE(gap == Catch::Approx(4.92350677e-2).margin(1e-9));
  REQUIRE(gap > 1e-3);
  ModelParams p;
  p.n_sites = 3;
  p.delta = 1.0;
  p.g = 0.3;
  p.n_fock = 6;
  REQUIRE(degeneracy_gap(p) <= 1e-9);
}

TEST_CASE("resolved decoupled ground state is the symmetric ferromagnet pair") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.0;
  p.n_fock = 2;
  ResolvedGroundState r = symmetry_resolved_ground_state(p);
  REQUIRE(r.degenerate);
  REQUIRE(std::abs(r.state.norm() - 1.0) <= 1e-12);
  const Eigen::VectorXcd up = ferro_state(p, true);
  const Eigen::VectorXcd dn = ferro_state(p, false);
  REQUIRE(std::abs(std::abs(up.dot(r.state)) - 1.0 / std::sqrt(2.0)) <= 1e-8);
  REQUIRE(std::abs(std::abs(dn.dot(r.state)) - 1.0 / std::sqrt(2.0)) <= 1e-8);
  // exact parity eigenvector with the reported eigenvalue
  const SparseCd par = parity_operator(p).mat;
  REQUIRE((par * r.state - r.parity_eigenvalue * r.state).norm() <= 1e-10);
  REQUIRE(r.parity_eigenvalue == complexd(1.0, 0.0)); // even chain: +1 branch
}

TEST_CASE("resolved states show no symmetry breaking anywhere on a grid") {
  ModelParams p;
  p.n_sites = 3;
  p.n_fock = 5;
  const SparseCd par = parity_operator(p).mat;
  for (double delta : {0.4, 1.0, 1.6}) {
    for (double g : {0.2, 0.8, 1.4}) {
      p.delta = delta;
      p.g = g;
      ResolvedGroundState r = symmetry_resolved_ground_state(p);
      REQUIRE(std::abs(r.state.norm() - 1.0) <= 1e-12);
      ObservableSet o = observables(r.state, p);
      REQUIRE(o.a_site.cwiseAbs().maxCoeff() <= 1e-10);
      REQUIRE(o.sx_site.cwiseAbs().maxCoeff() <= 1e-10);
      REQUIRE(o.sz_site.cwiseAbs().maxCoeff() <= 1e-10);
      // parity eigenvector property (odd chain: eigenvalue +i)
      REQUIRE((par * r.state - r.parity_eigenvalue * r.state).norm() <= 1e-8);
      if (r.degenerate) REQUIRE(r.parity_eigenvalue == complexd(0.0, 1.0));
      // energy consistency of the representative
      const SparseCd h = build_hamiltonian(p).mat;
      const complexd e = r.state.dot(h * r.state);
      REQUIRE(std::abs(e.real() - r.energy) <= 1e-8);
      REQUIRE(std::abs(e.imag()) <= 1e-10);
    }
  }
}

TEST_CASE("gauge rotations connect equal-energy sectors") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 0.8;
  p.g = 0.9;
  p.n_fock = 6;
  ResolvedGroundState r = symmetry_resolved_ground_state(p);
  const SparseCd h = build_hamiltonian(p).mat;
  for (int j = 1; j <= p.n_sites; ++j) {
    const Eigen::VectorXcd rotated = gauge_operator(p, j).mat * r.state;
    const complexd e = rotated.dot(h * rotated);
    REQUIRE(std::abs(e.real() - r.energy) <= 1e-10);
  }
}

TEST_CASE("observables of product references") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.3;
  p.n_fock = 3;
  SECTION("polarized ferromagnet on the boson vacuum") {
    ObservableSet o = observables(ferro_state(p, true), p);
    REQUIRE(o.n_mean == 0.0);
    REQUIRE((o.sz_site.array() - 1.0).abs().maxCoeff() <= 1e-12);
    REQUIRE(o.sx_site.cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE(o.czz.cwiseAbs().maxCoeff() <= 1e-12); // connected, product state
  }
  SECTION("symmetric combination carries full zz correlation") {
    Eigen::VectorXcd cat = ferro_state(p, true) + ferro_state(p, false);
    cat.normalize();
    ObservableSet o = observables(cat, p);
    REQUIRE(o.sz_site.cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE(o.czz(0, 1) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(o.czz(1, 0) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("state and model dimensions must match") {
    Eigen::VectorXcd wrong = Eigen::VectorXcd::Zero(10);
    wrong[0] = 1.0;
    REQUIRE_THROWS_AS(observables(wrong, p), InvalidParams);
  }
}

TEST_CASE("displaced product state reproduces the coherent occupation") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.5;
  p.n_fock = 8; // >= 8 alpha^2 + 6 for alpha = 0.5
  const double alpha = p.g / p.delta;
  const Eigen::VectorXcd psi = dressed_ferro_state(p, true);
  ObservableSet o = observables(psi, p);
  REQUIRE(std::abs(o.n_mean - alpha * alpha) <= 1e-6);
  REQUIRE((o.sx_site.array() - 1.0).abs().maxCoeff() <= 1e-10);
  // variational energy of the product: N (delta alpha^2 - 2 g alpha)
  const SparseCd h = build_hamiltonian(p).mat;
  const double e = psi.dot(h * psi).real();
  const double expect = p.n_sites * (p.delta * alpha * alpha - 2 * p.g * alpha);
  REQUIRE(std::abs(e - expect) <= 1e-6);
  REQUIRE(expect == Catch::Approx(-p.n_sites * p.g * p.g / p.delta));
  // opposite branch polarizes sigma^x the other way
  ObservableSet om = observables(dressed_ferro_state(p, false), p);
  REQUIRE((om.sx_site.array() + 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("ground energy converges as the oscillator cutoff grows") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  double e7 = 0, e8 = 0;
  for (int nf = 2; nf <= 8; ++nf) {
    p.n_fock = nf;
    const double e = ground_space(p, 1).energies[0];
    REQUIRE(e <= prev + 1e-12);
    if (nf == 7) e7 = e;
    if (nf == 8) e8 = e;
    prev = e;
  }
  REQUIRE(std::abs(e8 - e7) <= 1e-6);
}
