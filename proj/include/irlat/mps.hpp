#pragma once
// Matrix-product-state machinery: rank-3 site tensors in column-major
// (left-bond, physical, right-bond) layout, canonical-form bookkeeping,
// exact observable contraction, and a versioned binary checkpoint.
//
// Layout invariant: data index = a + dl*(s + d*b).  That single layout
// serves both GEMM reshapes without copying:
//   left view  : (dl*d) x dr   -- rows (a + dl*s)
//   right view : dl x (d*dr)   -- cols (s + d*b)
// All tensors are real: the Hamiltonian is real symmetric, so a real ground
// MPS always exists and keeps every contraction in dgemm.

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irlat/errors.hpp"
#include "irlat/model.hpp"

namespace irlat {

struct Tensor3 {
  int dl = 1, d = 1, dr = 1;
  Eigen::VectorXd v;

  Tensor3() = default;
  Tensor3(int dl_, int d_, int dr_)
      : dl(dl_), d(d_), dr(dr_), v(Eigen::VectorXd::Zero(std::int64_t(dl_) * d_ * dr_)) {}
  std::int64_t size() const { return std::int64_t(dl) * d * dr; }
  double& at(int a, int s, int b) { return v[a + std::int64_t(dl) * (s + std::int64_t(d) * b)]; }
  double at(int a, int s, int b) const {
    return v[a + std::int64_t(dl) * (s + std::int64_t(d) * b)];
  }
  Eigen::Map<Eigen::MatrixXd> left() {
    return {v.data(), std::int64_t(dl) * d, dr};
  }
  Eigen::Map<const Eigen::MatrixXd> left() const {
    return {v.data(), std::int64_t(dl) * d, dr};
  }
  Eigen::Map<Eigen::MatrixXd> right() {
    return {v.data(), dl, std::int64_t(d) * dr};
  }
  Eigen::Map<const Eigen::MatrixXd> right() const {
    return {v.data(), dl, std::int64_t(d) * dr};
  }
};

namespace mpsdet {

// Y(a, s', r) = sum_s O(s', s) X(a, s, r) on an (al x d*nr) matrix view.
inline Eigen::MatrixXd apply_mid(const Eigen::MatrixXd& o,
                                 const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 int d) {
  const int nr = int(x.cols()) / d;
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (int r = 0; r < nr; ++r)
    y.middleCols(std::int64_t(r) * d, d).noalias() =
        x.middleCols(std::int64_t(r) * d, d) * o.transpose();
  return y;
}

}  // namespace mpsdet

struct MPSState {
  int n_sites = 0;
  int local_dim = 0;
  int center = 0; // canonical center, 0-based
  std::vector<Tensor3> t;

  int bond_dim(int bond) const { return t.at(bond).dr; } // bond i: between sites i, i+1
  int max_bond_dim() const {
    int m = 1;
    for (int i = 0; i + 1 < n_sites; ++i) m = std::max(m, t[i].dr);
    return m;
  }
  double norm() const { return t.at(center).v.norm(); }

  // Isometry defects; both are ~1e-15 on freshly canonicalized states.
  double left_isometry_defect(int site) const {
    const auto a = t.at(site).left();
    return (a.transpose() * a -
            Eigen::MatrixXd::Identity(t[site].dr, t[site].dr))
        .cwiseAbs()
        .maxCoeff();
  }
  double right_isometry_defect(int site) const {
    const auto a = t.at(site).right();
    return (a * a.transpose() -
            Eigen::MatrixXd::Identity(t[site].dl, t[site].dl))
        .cwiseAbs()
        .maxCoeff();
  }
  double max_isometry_defect() const {
    double m = 0.0;
    for (int i = 0; i < center; ++i) m = std::max(m, left_isometry_defect(i));
    for (int i = center + 1; i < n_sites; ++i)
      m = std::max(m, right_isometry_defect(i));
    return m;
  }

  // Move the canonical center one site right/left via thin QR (LQ), keeping
  // the global state exact; deterministic sign convention from Householder.
  void shift_center_right() {
    Tensor3& a = t[center];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.left());
    const int r = int(std::min<std::int64_t>(a.left().rows(), a.dr));
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.left().rows(), r);
    Eigen::MatrixXd rest =
        qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    Tensor3 na(a.dl, a.d, r);
    na.left() = q;
    Tensor3& b = t[center + 1];
    Tensor3 nb(r, b.d, b.dr);
    nb.right().noalias() = rest * b.right();
    t[center] = std::move(na);
    t[center + 1] = std::move(nb);
    ++center;
  }
  void shift_center_left() {
    Tensor3& b = t[center];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.right().transpose());
    const int r = int(std::min<std::int64_t>(b.right().cols(), b.dl));
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(b.right().cols(), r);
    Eigen::MatrixXd rest =
        qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    Tensor3 nb(r, b.d, b.dr);
    nb.right() = q.transpose();
    Tensor3& a = t[center - 1];
    Tensor3 na(a.dl, a.d, r);
    na.left().noalias() = a.left() * rest.transpose();
    t[center] = std::move(nb);
    t[center - 1] = std::move(na);
    --center;
  }
  void canonicalize(int new_center) {
    while (center > new_center) shift_center_left();
    while (center < new_center) shift_center_right();
  }
  void normalize() { t[center].v.normalize(); }
};

inline MPSState random_mps(const ModelParams& p, int max_bond,
                           std::uint64_t seed) {
  p.validate();
  MPSState s;
  s.n_sites = p.n_sites;
  s.local_dim = p.local_dim();
  s.t.resize(p.n_sites);
  // exact bond-dimension profile capped by max_bond
  std::vector<int> bonds(p.n_sites + 1, 1);
  for (int i = 1; i < p.n_sites; ++i) {
    double dl = std::pow(double(s.local_dim), i);
    double dr = std::pow(double(s.local_dim), p.n_sites - i);
    bonds[i] = int(std::min({double(max_bond), dl, dr, 1e9}));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int i = 0; i < p.n_sites; ++i) {
    s.t[i] = Tensor3(bonds[i], s.local_dim, bonds[i + 1]);
    for (std::int64_t k = 0; k < s.t[i].size(); ++k) s.t[i].v[k] = nd(rng);
  }
  s.center = p.n_sites - 1;
  s.canonicalize(0);
  s.normalize();
  return s;
}

// Product MPS from one local amplitude vector per site (bond dimension 1).
inline MPSState product_mps(const std::vector<Eigen::VectorXd>& locals) {
  if (locals.empty()) throw InvalidParams("product_mps: empty chain");
  MPSState s;
  s.n_sites = int(locals.size());
  s.local_dim = int(locals[0].size());
  s.center = 0;
  s.t.resize(s.n_sites);
  for (int i = 0; i < s.n_sites; ++i) {
    if (int(locals[i].size()) != s.local_dim)
      throw InvalidParams("product_mps: inhomogeneous local dims");
    s.t[i] = Tensor3(1, s.local_dim, 1);
    s.t[i].v = locals[i];
    if (i != s.center) s.t[i].v.normalize();
  }
  return s;
}

// Dense amplitude vector in the site-major basis (small chains only).
inline Eigen::VectorXd mps_to_dense(const MPSState& s) {
  std::int64_t dim = 1;
  for (int i = 0; i < s.n_sites; ++i) {
    dim *= s.local_dim;
    if (dim > (std::int64_t(1) << 24))
      throw DimensionOverflow("mps_to_dense: chain too large");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  for (int i = 0; i < s.n_sites; ++i) {
    // rows: physical prefix (site-major), cols: current bond
    const Tensor3& a = s.t[i];
    Eigen::MatrixXd grown = m * a.right(); // rows x (s + d*b)
    Eigen::MatrixXd next(m.rows() * a.d, a.dr);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (int sph = 0; sph < a.d; ++sph)
        for (int b = 0; b < a.dr; ++b)
          next(r * a.d + sph, b) = grown(r, sph + std::int64_t(a.d) * b);
    m = std::move(next);
  }
  return Eigen::VectorXd(m.col(0));
}

// <psi| (op at site) |psi> with the center already at `site`.
inline double local_expectation(const MPSState& s, int site,
                                const Eigen::MatrixXd& op) {
  if (site != s.center) throw InvalidParams("local_expectation: move center first");
  const Tensor3& c = s.t[site];
  const Eigen::MatrixXd x = mpsdet::apply_mid(op, c.right(), c.d);
  return (x.array() *
          Eigen::Map<const Eigen::ArrayXXd>(c.v.data(), x.rows(), x.cols()))
      .sum();
}

// Connected <z_ref z_j> row plus per-site one-point functions; exact
// contraction at O(N D^3 d).
inline ObservableSet mps_observables(const MPSState& in, const ModelParams& p,
                                     int ref_site_1based = -1) {
  p.validate();
  if (in.n_sites != p.n_sites || in.local_dim != p.local_dim())
    throw InvalidParams("mps_observables: state/model mismatch");
  const int n = p.n_sites;
  const int d = p.local_dim();
  const int ref = (ref_site_1based > 0 ? ref_site_1based : (n + 1) / 2) - 1;
  if (ref < 0 || ref >= n) throw IndexOutOfRange("mps_observables: bad reference site");

  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd idf = Eigen::MatrixXcd::Identity(p.n_fock, p.n_fock);
  const Eigen::MatrixXd num =
      kron_dense(id2, boson_number(p.n_fock)).real();
  const Eigen::MatrixXd aop = kron_dense(id2, boson_a(p.n_fock)).real();
  const Eigen::MatrixXd sx = kron_dense(pauli_x(), idf).real();
  const Eigen::MatrixXd sz = kron_dense(pauli_z(), idf).real();

  MPSState s = in; // work on a copy; contraction moves the center
  s.canonicalize(0);
  s.normalize();

  ObservableSet o;
  o.n_site = Eigen::VectorXd::Zero(n);
  o.a_site = Eigen::VectorXcd::Zero(n);
  o.sx_site = Eigen::VectorXd::Zero(n);
  o.sz_site = Eigen::VectorXd::Zero(n);
  o.czz = Eigen::MatrixXd::Constant(n, n, std::nan(""));

  for (int i = 0; i < n; ++i) {
    s.canonicalize(i);
    o.n_site[i] = local_expectation(s, i, num);
    o.a_site[i] = local_expectation(s, i, aop);
    o.sx_site[i] = local_expectation(s, i, sx);
    o.sz_site[i] = local_expectation(s, i, sz);
  }
  o.n_mean = o.n_site.mean();

  // Two-point <z_ref z_j> by transfer sweeps away from the reference site.
  // All intermediate environments are symmetric matrices because the tensors
  // are real and sigma^z is real diagonal, which lets bra/ket insertions be
  // interchanged freely below.
  auto czz_row = [&](int r, Eigen::VectorXd& zz) {
    s.canonicalize(r);
    const Tensor3& c = s.t[r];
    zz[r] = 1.0; // sigma^z squared is the identity
    {
      // rightward: g(b', b) = sum C(a,s',b') z(s',s) C(a,s,b)
      Eigen::MatrixXd x = mpsdet::apply_mid(sz, c.right(), d);
      Eigen::Map<const Eigen::MatrixXd> xl(x.data(), std::int64_t(c.dl) * d, c.dr);
      Eigen::MatrixXd g = xl.transpose() * c.left();
      for (int j = r + 1; j < n; ++j) {
        const Tensor3& b = s.t[j];
        Eigen::MatrixXd ket = g * b.right(); // (b' x (s + d*c))
        Eigen::MatrixXd bra = mpsdet::apply_mid(sz, b.right(), d);
        zz[j] = (bra.array() * ket.array()).sum();
        Eigen::Map<const Eigen::MatrixXd> ketl(ket.data(),
                                               std::int64_t(b.dl) * d, b.dr);
        g.noalias() = b.left().transpose() * ketl;
      }
    }
    {
      // leftward: h(a', a) = sum C(a',s',b) z(s',s) C(a,s,b)
      Eigen::MatrixXd xz = mpsdet::apply_mid(sz, c.right(), d);
      Eigen::MatrixXd h = xz * c.right().transpose();
      for (int j = r - 1; j >= 0; --j) {
        const Tensor3& b = s.t[j];
        Eigen::MatrixXd ket = b.left() * h; // ((b,s) x a')
        Eigen::MatrixXd braz = mpsdet::apply_mid(sz, b.right(), d);
        zz[j] = (Eigen::Map<const Eigen::MatrixXd>(braz.data(),
                                                   std::int64_t(b.dl) * d, b.dr)
                     .array() *
                 Eigen::Map<const Eigen::MatrixXd>(ket.data(),
                                                   std::int64_t(b.dl) * d, b.dr)
                     .array())
                    .sum();
        Eigen::Map<const Eigen::MatrixXd> ketr(ket.data(), b.dl,
                                               std::int64_t(d) * b.dr);
        h.noalias() = ketr * b.right().transpose();
      }
    }
  };

  Eigen::VectorXd zzrow = Eigen::VectorXd::Zero(n);
  if (n <= 16) {
    for (int r = 0; r < n; ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      czz_row(r, row);
      for (int j = 0; j < n; ++j)
        o.czz(r, j) = row[j] - o.sz_site[r] * o.sz_site[j];
    }
  } else {
    czz_row(ref, zzrow);
    for (int j = 0; j < n; ++j)
      o.czz(ref, j) = o.czz(j, ref) = zzrow[j] - o.sz_site[ref] * o.sz_site[j];
  }
  return o;
}

// ---- checkpoint: magic, version, dims, then row-major payloads ----------

inline void save_mps(const MPSState& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("save_mps: cannot open " + path);
  const char magic[8] = {'I', 'R', 'L', 'M', 'P', 'S', '0', '1'};
  f.write(magic, 8);
  auto w32 = [&](std::int32_t x) { f.write(reinterpret_cast<char*>(&x), 4); };
  w32(s.n_sites);
  w32(s.local_dim);
  w32(s.center);
  for (const Tensor3& t : s.t) {
    w32(t.dl); w32(t.d); w32(t.dr);
    for (int a = 0; a < t.dl; ++a)
      for (int sph = 0; sph < t.d; ++sph)
        for (int b = 0; b < t.dr; ++b) {
          const double x = t.at(a, sph, b);
          f.write(reinterpret_cast<const char*>(&x), 8);
        }
  }
  if (!f) throw Error("save_mps: write failed for " + path);
}

inline MPSState load_mps(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("load_mps: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::string(magic, 8) != "IRLMPS01")
    throw Error("load_mps: bad magic/version in " + path);
  auto r32 = [&]() {
    std::int32_t x = 0;
    f.read(reinterpret_cast<char*>(&x), 4);
    return x;
  };
  MPSState s;
  s.n_sites = r32();
  s.local_dim = r32();
  s.center = r32();
  if (s.n_sites < 1 || s.n_sites > 100000 || s.local_dim < 1)
    throw Error("load_mps: corrupt header in " + path);
  s.t.resize(s.n_sites);
  for (int i = 0; i < s.n_sites; ++i) {
    const int dl = r32(), d = r32(), dr = r32();
    if (dl < 1 || d != s.local_dim || dr < 1)
      throw Error("load_mps: corrupt tensor header in " + path);
    s.t[i] = Tensor3(dl, d, dr);
    for (int a = 0; a < dl; ++a)
      for (int sph = 0; sph < d; ++sph)
        for (int b = 0; b < dr; ++b) {
          double x = 0;
          f.read(reinterpret_cast<char*>(&x), 8);
          s.t[i].at(a, sph, b) = x;
        }
  }
  if (!f) throw Error("load_mps: truncated file " + path);
  return s;
}

}  // namespace irlat
