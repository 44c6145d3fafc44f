#pragma once
// Ising-Rabi lattice model on an open chain of N sites, each carrying a
// qubit and a truncated oscillator:
//
//   H = delta * sum_j a^dag_j a_j
//     + g     * sum_j sigma^x_j (a^dag_j + a_j)
//     - J     * sum_{j=1}^{N-1} sigma^z_j sigma^z_{j+1}
//
// Basis: site-major with site 1 most significant.  The local index on each
// site is l = s*n_fock + m with spin s in {0,1} (s=0 <-> sigma^z=+1) and
// oscillator occupation m in [0, n_fock).  All Hamiltonian entries are real;
// operators are stored complex because the symmetry operators are not.

#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "irlat/errors.hpp"

namespace irlat {

using complexd = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<complexd>;

struct ModelParams {
  int n_sites = 2;
  double delta = 1.0;   // oscillator detuning
  double g = 0.0;       // qubit-oscillator coupling
  double j_ising = 1.0; // nearest-neighbour Ising exchange (energy unit)
  int n_fock = 2;       // oscillator levels kept: occupations 0..n_fock-1

  void validate() const {
    if (n_sites < 2) throw InvalidParams("n_sites must be >= 2");
    if (n_fock < 2) throw InvalidParams("n_fock must be >= 2");
    if (delta < 0.0) throw InvalidParams("delta must be >= 0");
    if (g < 0.0) throw InvalidParams("g must be >= 0");
    if (j_ising < 0.0) throw InvalidParams("j_ising must be >= 0");
  }
  int local_dim() const { return 2 * n_fock; }
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Hard guard: full Hilbert space dimensions above 2^26 are refused.
inline constexpr std::int64_t kMaxDenseDim = std::int64_t(1) << 26;

inline std::int64_t hilbert_dimension(const ModelParams& p) {
  p.validate();
  std::int64_t dim = 1;
  for (int j = 0; j < p.n_sites; ++j) {
    dim *= p.local_dim();
    if (dim > kMaxDenseDim)
      throw DimensionOverflow("Hilbert dimension exceeds 2^26; use the MPS solver");
  }
  return dim;
}

// Index arithmetic for the site-major basis.  Sites are 1-based.
struct BasisCodec {
  int n_sites;
  int n_fock;
  int d;                 // local dimension
  std::int64_t dim;
  std::vector<std::int64_t> stride_; // stride_[j-1] = d^(N-j)

  explicit BasisCodec(const ModelParams& p)
      : n_sites(p.n_sites), n_fock(p.n_fock), d(p.local_dim()),
        dim(hilbert_dimension(p)), stride_(p.n_sites) {
    std::int64_t s = 1;
    for (int j = n_sites; j >= 1; --j) {
      stride_[j - 1] = s;
      s *= d;
    }
  }
  std::int64_t stride(int j) const { return stride_[j - 1]; }
  int local(std::int64_t idx, int j) const {
    return int((idx / stride(j)) % d);
  }
  // spin s in {0,1}; sigma^z eigenvalue is 1-2s
  int spin(std::int64_t idx, int j) const { return local(idx, j) / n_fock; }
  int occ(std::int64_t idx, int j) const { return local(idx, j) % n_fock; }
  double sz(std::int64_t idx, int j) const { return 1.0 - 2.0 * spin(idx, j); }
  std::int64_t with_spin_flipped(std::int64_t idx, int j) const {
    return spin(idx, j) == 0 ? idx + std::int64_t(n_fock) * stride(j)
                             : idx - std::int64_t(n_fock) * stride(j);
  }
  std::int64_t with_occ_shifted(std::int64_t idx, int j, int dm) const {
    return idx + std::int64_t(dm) * stride(j);
  }
};

struct SparseOperator {
  SparseCd mat;
  Eigen::Index dim() const { return mat.rows(); }
};

inline double max_abs(const SparseCd& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

// Full Hamiltonian assembled by direct basis enumeration.
inline SparseOperator build_hamiltonian(const ModelParams& p) {
  BasisCodec c(p);
  std::vector<Eigen::Triplet<complexd>> trips;
  trips.reserve(std::size_t(c.dim) * (p.n_sites + 2));
  for (std::int64_t i = 0; i < c.dim; ++i) {
    double diag = 0.0;
    for (int j = 1; j <= p.n_sites; ++j) {
      diag += p.delta * c.occ(i, j);
      if (j < p.n_sites) diag -= p.j_ising * c.sz(i, j) * c.sz(i, j + 1);
    }
    if (diag != 0.0) trips.emplace_back(i, i, diag);
    if (p.g != 0.0) {
      for (int j = 1; j <= p.n_sites; ++j) {
        const int m = c.occ(i, j);
        const std::int64_t f = c.with_spin_flipped(i, j);
        if (m + 1 < p.n_fock)
          trips.emplace_back(c.with_occ_shifted(f, j, +1), i,
                             p.g * std::sqrt(double(m + 1)));
        if (m > 0)
          trips.emplace_back(c.with_occ_shifted(f, j, -1), i,
                             p.g * std::sqrt(double(m)));
      }
    }
  }
  SparseOperator h;
  h.mat.resize(c.dim, c.dim);
  h.mat.setFromTriplets(trips.begin(), trips.end());
  return h;
}

// --- local building blocks (dense d x d, d = 2*n_fock) ------------------

inline Eigen::MatrixXcd kron_dense(const Eigen::MatrixXcd& a,
                                   const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}
inline Eigen::MatrixXcd pauli_z() {
  Eigen::MatrixXcd s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}
inline Eigen::MatrixXcd boson_a(int n_fock) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  for (int m = 1; m < n_fock; ++m) a(m - 1, m) = std::sqrt(double(m));
  return a;
}
inline Eigen::MatrixXcd boson_number(int n_fock) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) n(m, m) = m;
  return n;
}

// On-site term delta*n + g*sigma^x (a + a^dag), and bond pair with the
// exchange folded into the left block.
struct LocalTerms {
  struct Bond {
    Eigen::MatrixXcd left, right;
  };
  std::vector<Eigen::MatrixXcd> site; // one per site
  std::vector<Bond> bond;             // one per nearest-neighbour pair
  int n_fock = 0;
};

inline LocalTerms build_local_terms(const ModelParams& p) {
  p.validate();
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd idf =
      Eigen::MatrixXcd::Identity(p.n_fock, p.n_fock);
  const Eigen::MatrixXcd a = boson_a(p.n_fock);
  const Eigen::MatrixXcd onsite =
      p.delta * kron_dense(id2, boson_number(p.n_fock)) +
      p.g * kron_dense(pauli_x(), a + a.adjoint());
  const Eigen::MatrixXcd zblock = kron_dense(pauli_z(), idf);
  LocalTerms t;
  t.n_fock = p.n_fock;
  t.site.assign(p.n_sites, onsite);
  t.bond.assign(p.n_sites - 1, {-p.j_ising * zblock, zblock});
  return t;
}

inline SparseCd sparse_kron(const SparseCd& a, const SparseCd& b) {
  std::vector<Eigen::Triplet<complexd>> trips;
  trips.reserve(std::size_t(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SparseCd::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SparseCd::InnerIterator ib(b, kb); ib; ++ib)
          trips.emplace_back(ia.row() * b.rows() + ib.row(),
                             ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
  SparseCd out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// Independent assembly route: Kronecker-lift every local term.  Used to
// cross-check build_hamiltonian entry by entry.
inline SparseOperator assemble(const LocalTerms& t) {
  const int n = int(t.site.size());
  const int d = int(t.site.at(0).rows());
  auto lift = [&](int j, const Eigen::MatrixXcd& blk) {
    SparseCd cur;
    for (int k = 1; k <= n; ++k) {
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
  };
  auto lift2 = [&](int j, const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& r) {
    SparseCd cur;
    for (int k = 1; k <= n; ++k) {
      SparseCd piece;
      if (k == j) piece = l.sparseView();
      else if (k == j + 1) piece = r.sparseView();
      else {
        piece.resize(d, d);
        piece.setIdentity();
      }
      cur = (k == 1) ? piece : sparse_kron(cur, piece);
    }
    return cur;
  };
  std::int64_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= d;
  SparseCd h(dim, dim);
  for (int j = 1; j <= n; ++j) h = h + lift(j, t.site[j - 1]);
  for (int j = 1; j < n; ++j) h = h + lift2(j, t.bond[j - 1].left, t.bond[j - 1].right);
  h.prune(0.0, 0.0);
  return SparseOperator{h};
}

// Local gauge symmetry exp[i pi (a^dag a + sigma^z/2)] at one site: diagonal
// with value (-1)^m * i*(1-2s); squares to -identity.
inline SparseOperator gauge_operator(const ModelParams& p, int site) {
  BasisCodec c(p);
  if (site < 1 || site > p.n_sites) throw IndexOutOfRange("gauge site out of range");
  std::vector<Eigen::Triplet<complexd>> trips;
  trips.reserve(std::size_t(c.dim));
  for (std::int64_t i = 0; i < c.dim; ++i) {
    const double sign = (c.occ(i, site) % 2 == 0) ? 1.0 : -1.0;
    trips.emplace_back(i, i, complexd(0.0, sign * c.sz(i, site)));
  }
  SparseOperator o;
  o.mat.resize(c.dim, c.dim);
  o.mat.setFromTriplets(trips.begin(), trips.end());
  return o;
}

// Global spin parity exp[i pi/2 sum_j sigma^x_j] = i^N prod_j sigma^x_j:
// flips every spin, leaves oscillators untouched.
inline SparseOperator parity_operator(const ModelParams& p) {
  BasisCodec c(p);
  static const complexd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const complexd amp = ipow[p.n_sites % 4];
  std::vector<Eigen::Triplet<complexd>> trips;
  trips.reserve(std::size_t(c.dim));
  for (std::int64_t i = 0; i < c.dim; ++i) {
    std::int64_t fl = i;
    for (int j = 1; j <= p.n_sites; ++j) fl = c.with_spin_flipped(fl, j);
    trips.emplace_back(fl, i, amp);
  }
  SparseOperator o;
  o.mat.resize(c.dim, c.dim);
  o.mat.setFromTriplets(trips.begin(), trips.end());
  return o;
}

inline double commutator_norm(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("commutator_norm: operand dimensions differ");
  SparseCd ab = a.mat * b.mat;
  SparseCd ba = b.mat * a.mat;
  SparseCd diff = ab - ba;
  return max_abs(diff);
}

// Debug serialization, one entry per line: row col re im.  Not a stable
// storage format.
inline void to_coord_text(const SparseOperator& op, std::ostream& os) {
  os.precision(17);
  for (int k = 0; k < op.mat.outerSize(); ++k)
    for (SparseCd::InnerIterator it(op.mat, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
         << it.value().imag() << '\n';
}

// Per-state observable bundle shared by the dense and MPS solvers.
struct ObservableSet {
  double n_mean = 0.0;          // chain-averaged oscillator occupation
  Eigen::VectorXd n_site;       // <a^dag a> per site
  Eigen::VectorXcd a_site;      // <a> per site
  Eigen::VectorXd sx_site;      // <sigma^x> per site
  Eigen::VectorXd sz_site;      // <sigma^z> per site
  Eigen::MatrixXd czz;          // connected <z_i z_j> - <z_i><z_j>
};

}  // namespace irlat
