// Hamiltonian assembly, basis indexing, and symmetry operators.
#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "irlat/exact.hpp"
#include "irlat/model.hpp"

using namespace irlat;

namespace {

// Kronecker-lift a dense local block onto site j of the chain.
SparseCd lift_site(const ModelParams& p, int j, const Eigen::MatrixXcd& blk) {
  const int d = p.local_dim();
  SparseCd cur;
  for (int k = 1; k <= p.n_sites; ++k) {
    SparseCd piece;
    if (k == j) {
      piece = blk.sparseView();
    } else {
      piece.resize(d, d);
      piece.setIdentity();
    }
    cur = (k == 1) ? piece : sparse_kron(cur, piece);
  }
  return cur;
}

double lowest_eigenvalue(const ModelParams& p) {
  const Eigen::MatrixXd h =
      build_hamiltonian(p).mat.toDense().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return es.eigenvalues()[0];
}

}  // namespace

TEST_CASE("parameter validation rejects degenerate chains and couplings") {
  ModelParams p;
  p.n_sites = 1;
  REQUIRE_THROWS_AS(p.validate(), InvalidParams);
  p = ModelParams{};
  p.n_fock = 1;
  REQUIRE_THROWS_AS(p.validate(), InvalidParams);
  p = ModelParams{};
  p.delta = -0.1;
  REQUIRE_THROWS_AS(p.validate(), InvalidParams);
  p = ModelParams{};
  p.g = -1.0;
  REQUIRE_THROWS_AS(p.validate(), InvalidParams);
  p = ModelParams{};
  p.j_ising = -2.0;
  REQUIRE_THROWS_AS(p.validate(), InvalidParams);
  REQUIRE_NOTHROW(ModelParams{}.validate());
}

TEST_CASE("hilbert dimension counts (2 n_fock)^N and guards overflow") {
  ModelParams p;
  p.n_sites = 2;
  p.n_fock = 2;
  REQUIRE(hilbert_dimension(p) == 16);
  p.n_sites = 3;
  p.n_fock = 4;
  REQUIRE(hilbert_dimension(p) == 512);
  p.n_sites = 40;
  p.n_fock = 8;
  REQUIRE_THROWS_AS(hilbert_dimension(p), DimensionOverflow);
}

TEST_CASE("basis codec round-trips local spin and occupation indices") {
  ModelParams p;
  p.n_sites = 3;
  p.n_fock = 4;
  BasisCodec c(p);
  REQUIRE(c.d == 8);
  REQUIRE(c.dim == 512);
  // site-major: site 1 most significant
  REQUIRE(c.stride(1) == 64);
  REQUIRE(c.stride(2) == 8);
  REQUIRE(c.stride(3) == 1);
  for (std::int64_t i : {std::int64_t(0), std::int64_t(137), std::int64_t(511)}) {
    std::int64_t rebuilt = 0;
    for (int j = 1; j <= 3; ++j) {
      const int l = c.local(i, j);
      REQUIRE(l == c.spin(i, j) * c.n_fock + c.occ(i, j));
      rebuilt += std::int64_t(l) * c.stride(j);
    }
    REQUIRE(rebuilt == i);
  }
  // spin flip is an involution that toggles sz
  for (int j = 1; j <= 3; ++j) {
    const std::int64_t i = 137;
    const std::int64_t f = c.with_spin_flipped(i, j);
    REQUIRE(c.with_spin_flipped(f, j) == i);
    REQUIRE(c.sz(f, j) == -c.sz(i, j));
    REQUIRE(c.occ(f, j) == c.occ(i, j));
  }
  // occupation shift moves one quantum
  REQUIRE(c.occ(c.with_occ_shifted(0, 2, 3), 2) == 3);
}

TEST_CASE("hamiltonian is exactly hermitian") {
  ModelParams p;
  p.n_sites = 3;
  p.delta = 0.7;
  p.g = 0.45;
  p.n_fock = 4;
  SparseOperator h = build_hamiltonian(p);
  SparseCd diff = SparseCd(h.mat.adjoint()) - h.mat;
  REQUIRE(max_abs(diff) == 0.0);
}

TEST_CASE("decoupled chain has the ferromagnetic pair energy") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.0;
  p.n_fock = 2;
  REQUIRE(lowest_eigenvalue(p) == Catch::Approx(-1.0).margin(1e-12));
  p.n_sites = 3;
  p.n_fock = 3;
  REQUIRE(lowest_eigenvalue(p) == Catch::Approx(-2.0).margin(1e-12));
}

TEST_CASE("weak coupling ground energy matches the quadratic correction") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.05;
  p.n_fock = 6;
  const double expect = -1.0 - 2.0 * p.g * p.g / 3.0; // -1.0016667
  REQUIRE(std::abs(lowest_eigenvalue(p) - expect) <= 1e-4);
}

TEST_CASE("local term list mirrors the assembled hamiltonian") {
  ModelParams p;
  p.n_sites = 3;
  p.delta = 0.7;
  p.g = 0.4;
  p.n_fock = 3;
  LocalTerms t = build_local_terms(p);
  REQUIRE(t.site.size() == 3);
  REQUIRE(t.bond.size() == 2);
  SparseOperator lifted = assemble(t);
  SparseOperator direct = build_hamiltonian(p);
  SparseCd diff = lifted.mat - direct.mat;
  REQUIRE(max_abs(diff) <= 1e-14);
}

TEST_CASE("zero coupling leaves no spin-boson block in the site terms") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 0.9;
  p.g = 0.0;
  p.n_fock = 3;
  LocalTerms t = build_local_terms(p);
  const Eigen::MatrixXcd pure =
      p.delta * kron_dense(Eigen::MatrixXcd::Identity(2, 2),
                           boson_number(p.n_fock));
  REQUIRE((t.site[0] - pure).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated ladder operator carries sqrt matrix elements") {
  const Eigen::MatrixXcd a = boson_a(5);
  for (int m = 1; m < 5; ++m)
    REQUIRE(std::abs(a(m - 1, m) - std::sqrt(double(m))) < 1e-15);
  REQUIRE(a.cwiseAbs().sum() ==
          Catch::Approx(1.0 + std::sqrt(2.0) + std::sqrt(3.0) + 2.0));
}

TEST_CASE("local gauge operator is diagonal, unitary, and squares to -1") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.3;
  p.n_fock = 3;
  SparseOperator o = gauge_operator(p, 1);
  for (int k = 0; k < o.mat.outerSize(); ++k)
    for (SparseCd::InnerIterator it(o.mat, k); it; ++it)
      REQUIRE(it.row() == it.col());
  SparseCd uu = SparseCd(o.mat * o.mat.adjoint());
  SparseCd id(o.dim(), o.dim());
  id.setIdentity();
  REQUIRE(max_abs(SparseCd(uu - id)) <= 1e-12);
  SparseCd sq = SparseCd(o.mat * o.mat);
  REQUIRE(max_abs(SparseCd(sq + id)) <= 1e-12);
  REQUIRE_THROWS_AS(gauge_operator(p, 0), IndexOutOfRange);
  REQUIRE_THROWS_AS(gauge_operator(p, 3), IndexOutOfRange);
}

TEST_CASE("gauge operators commute with the hamiltonian") {
  ModelParams p;
  p.n_sites = 3;
  p.delta = 1.0;
  p.g = 0.6;
  p.n_fock = 4;
  SparseOperator h = build_hamiltonian(p);
  for (int j = 1; j <= p.n_sites; ++j)
    REQUIRE(commutator_norm(h, gauge_operator(p, j)) <= 1e-12);
}

TEST_CASE("gauge conjugation negates the on-site ladder operator") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.3;
  p.n_fock = 4;
  const Eigen::MatrixXcd a_local =
      kron_dense(Eigen::MatrixXcd::Identity(2, 2), boson_a(p.n_fock));
  for (int j = 1; j <= p.n_sites; ++j) {
    SparseCd a = lift_site(p, j, a_local);
    SparseCd o = gauge_operator(p, j).mat;
    SparseCd conj = SparseCd(o * a * o.adjoint());
    REQUIRE(max_abs(SparseCd(conj + a)) <= 1e-12);
  }
}

TEST_CASE("parity operator is unitary, squares to a sign, commutes with H") {
  ModelParams p;
  p.n_sites = 3;
  p.delta = 1.0;
  p.g = 0.6;
  p.n_fock = 4;
  SparseOperator par = parity_operator(p);
  SparseCd id(par.dim(), par.dim());
  id.setIdentity();
  REQUIRE(max_abs(SparseCd(SparseCd(par.mat * par.mat.adjoint()) - id)) <= 1e-12);
  // P^2 = (-1)^N identity
  SparseCd sq = SparseCd(par.mat * par.mat);
  REQUIRE(max_abs(SparseCd(sq + id)) <= 1e-12);
  REQUIRE(commutator_norm(build_hamiltonian(p), par) <= 1e-12);
  // conjugation flips sigma^z on every site
  const Eigen::MatrixXcd z_local =
      kron_dense(pauli_z(), Eigen::MatrixXcd::Identity(p.n_fock, p.n_fock));
  SparseCd z1 = lift_site(p, 2, z_local);
  SparseCd conj = SparseCd(par.mat * z1 * par.mat.adjoint());
  REQUIRE(max_abs(SparseCd(conj + z1)) <= 1e-12);
}

TEST_CASE("symmetries hold across random couplings") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  ModelParams p;
  p.n_sites = 3;
  p.n_fock = 4;
  for (int trial = 0; trial < 5; ++trial) {
    p.delta = u(rng);
    p.g = u(rng);
    SparseOperator h = build_hamiltonian(p);
    for (int j = 1; j <= p.n_sites; ++j)
      REQUIRE(commutator_norm(h, gauge_operator(p, j)) <= 1e-12);
    REQUIRE(commutator_norm(h, parity_operator(p)) <= 1e-12);
  }
}

TEST_CASE("commutator norm flags dimension mismatch and detects non-commutation") {
  ModelParams p2;
  p2.n_sites = 2;
  p2.n_fock = 2;
  ModelParams p3 = p2;
  p3.n_sites = 3;
  SparseOperator a = build_hamiltonian(p2);
  SparseOperator b = build_hamiltonian(p3);
  REQUIRE_THROWS_AS(commutator_norm(a, b), DimensionMismatch);
  REQUIRE(commutator_norm(a, a) == 0.0);
  const Eigen::MatrixXcd x_local =
      kron_dense(pauli_x(), Eigen::MatrixXcd::Identity(p2.n_fock, p2.n_fock));
  const Eigen::MatrixXcd z_local =
      kron_dense(pauli_z(), Eigen::MatrixXcd::Identity(p2.n_fock, p2.n_fock));
  SparseOperator sx{lift_site(p2, 1, x_local)};
  SparseOperator sz{lift_site(p2, 1, z_local)};
  REQUIRE(commutator_norm(sx, sz) > 0.1);
}

TEST_CASE("ground energy does not increase when the cutoff grows") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  for (int nf = 2; nf <= 6; ++nf) {
    p.n_fock = nf;
    const double e = lowest_eigenvalue(p);
    REQUIRE(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("coordinate text dump lists every stored entry") {
  ModelParams p;
  p.n_sites = 2;
  p.delta = 1.0;
  p.g = 0.0;
  p.n_fock = 2;
  SparseOperator h = build_hamiltonian(p);
  std::ostringstream os;
  to_coord_text(h, os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  bool diag_only = true;
  while (std::getline(is, line)) {
    ++lines;
    std::istringstream ls(line);
    long r = -1, c = -1;
    double re = 0, im = 0;
    ls >> r >> c >> re >> im;
    if (r != c) diag_only = false;
    REQUIRE(im == 0.0);
  }
  REQUIRE(lines == h.mat.nonZeros());
  REQUIRE(diag_only); // g = 0 leaves a diagonal matrix
}
