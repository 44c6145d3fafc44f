#pragma once
// Phase-diagram machinery: order-parameter scans over (delta, g) grids with
// any of the four solvers, numerical derivatives, correlation-length
// extraction from the connected z-correlator, and the two log-space fits
// (critical-line exponent, inverse-correlation-length scaling).
//
// DMRG scan rows are produced twice, warm-started upward and downward in g;
// each row keeps the lower-energy branch and records a "hysteresis" flag
// when the branches disagree on n — that disagreement is itself the
// first-order transition diagnostic, not an error.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "irlat/dmrg.hpp"
#include "irlat/errors.hpp"
#include "irlat/exact.hpp"
#include "irlat/model.hpp"
#include "irlat/variational.hpp"

namespace irlat {

enum class ScanMethod { kED, kBO, kSH, kDMRG };

inline std::string to_string(ScanMethod m) {
  switch (m) {
    case ScanMethod::kED: return "ED";
    case ScanMethod::kBO: return "BO";
    case ScanMethod::kSH: return "SH";
    case ScanMethod::kDMRG: return "DMRG";
  }
  return "?";
}

inline ScanMethod scan_method_from_string(const std::string& s) {
  if (s == "ED" || s == "ed") return ScanMethod::kED;
  if (s == "BO" || s == "bo") return ScanMethod::kBO;
  if (s == "SH" || s == "sh") return ScanMethod::kSH;
  if (s == "DMRG" || s == "dmrg") return ScanMethod::kDMRG;
  throw InvalidParams("unknown scan method: " + s);
}

struct ScanRow {
  double delta = 0.0;
  double g = 0.0;
  std::string method;
  double energy = std::numeric_limits<double>::quiet_NaN();
  double n = std::numeric_limits<double>::quiet_NaN();
  double dn_dg = std::numeric_limits<double>::quiet_NaN();
  double chi = std::numeric_limits<double>::quiet_NaN();
  std::string flags; // semicolon-joined: cutoff, hysteresis, error:<Type>
};

struct ScanTable {
  std::vector<ScanRow> rows;
  // grid metadata
  double g_step = 0.0;
  std::vector<double> deltas;
  int n_sites = 0;
  int n_fock = 0;
  int max_bond = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int point_count = 0;
  std::vector<double> residuals;
};

namespace detail {

inline FitResult fit_linear(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const int n = int(x.size());
  if (n < 2) throw InsufficientPoints("linear fit needs at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw InsufficientPoints("linear fit: degenerate abscissae");
  FitResult f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  f.point_count = n;
  double ssres = 0, sstot = 0;
  const double ybar = sy / n;
  f.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    f.residuals[i] = r;
    ssres += r * r;
    sstot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r_squared = sstot > 0 ? std::max(0.0, 1.0 - ssres / sstot)
                          : (ssres < 1e-30 ? 1.0 : 0.0);
  return f;
}

inline void add_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}

}  // namespace detail

// chi = -1/slope of log|C| against separation, restricted to separations
// >= 1 with |C| above the 1e-12 noise floor.  Also exposes the fit itself
// so r^2 can be asserted.
inline FitResult correlation_decay_fit(
    const std::vector<std::pair<double, double>>& profile) {
  std::vector<double> xs, ys;
  for (const auto& [sep, c] : profile)
    if (sep >= 1.0 && std::abs(c) > 1e-12) {
      xs.push_back(sep);
      ys.push_back(std::log(std::abs(c)));
    }
  if (int(xs.size()) < 4)
    throw InsufficientDecay("correlation fit: fewer than 4 usable points");
  return detail::fit_linear(xs, ys);
}

inline double correlation_length(
    const std::vector<std::pair<double, double>>& profile) {
  const FitResult f = correlation_decay_fit(profile);
  if (f.slope >= 0.0)
    throw InsufficientDecay("correlation fit: profile does not decay");
  return -1.0 / f.slope;
}

// log-log regression of the dn/dg peak locations: slope is the critical
// exponent of g_c(delta).
inline FitResult fit_critical_line(
    const std::vector<std::pair<double, double>>& peaks, double j_ising = 1.0) {
  if (int(peaks.size()) < 3)
    throw InsufficientPoints("critical-line fit needs >= 3 points");
  std::vector<double> xs, ys;
  for (const auto& [delta, gpk] : peaks) {
    if (!(delta > 0.0) || !(gpk > 0.0))
      throw InvalidParams("critical-line fit: points must be positive");
    if (!(delta < j_ising))
      throw InvalidParams("critical-line fit applies to delta < J");
    xs.push_back(std::log(delta));
    ys.push_back(std::log(gpk));
  }
  return detail::fit_linear(xs, ys);
}

// linear regression of 1/chi_c against delta.
inline FitResult fit_chi_scaling(
    const std::vector<std::pair<double, double>>& points) {
  if (int(points.size()) < 3)
    throw InsufficientPoints("chi scaling fit needs >= 3 points");
  std::vector<double> xs, ys;
  for (const auto& [delta, chi] : points) {
    if (!(chi > 0.0)) throw InvalidParams("chi scaling fit: chi must be > 0");
    xs.push_back(delta);
    ys.push_back(1.0 / chi);
  }
  return detail::fit_linear(xs, ys);
}

struct ScanOptions {
  DMRGConfig dmrg;
  int jobs = 1;
  bool compute_chi = false;    // fit chi from the center-row correlator (DMRG)
  int correlation_ref = -1;    // 1-based; default ceil(N/2)
};

namespace detail {

inline std::vector<double> g_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InvalidParams("scan: g step must be > 0");
  if (hi < lo) throw InvalidParams("scan: empty g range");
  std::vector<double> g;
  const int count = int(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) g.push_back(lo + i * step);
  return g;
}

inline void scan_delta_block(double delta, const std::vector<double>& gs,
                             const ModelParams& base, ScanMethod method,
                             const ScanOptions& opt, std::vector<ScanRow>& out) {
  const int npts = int(gs.size());
  out.assign(npts, {});
  for (int i = 0; i < npts; ++i) {
    out[i].delta = delta;
    out[i].g = gs[i];
    out[i].method = to_string(method);
  }
  auto closed_point = [&](int i) {
    ModelParams p = base;
    p.delta = delta;
    p.g = gs[i];
    ScanRow& r = out[i];
    try {
      switch (method) {
        case ScanMethod::kBO: {
          BOResult b = minimize_bo(p);
          r.energy = b.energy_per_site * p.n_sites;
          r.n = b.n;
          break;
        }
        case ScanMethod::kSH: {
          SHResult sh = minimize_sh(p);
          r.energy = sh.energy;
          r.n = sh.n;
          break;
        }
        case ScanMethod::kED: {
          GroundSpace gsr = ground_space(p, 1);
          r.energy = gsr.energies[0];
          r.n = observables(gsr.states[0], p).n_mean;
          break;
        }
        case ScanMethod::kDMRG:
          break; // handled by the warm-start chains below
      }
    } catch (const Error& e) {
      detail::add_flag(r.flags, std::string("error:") + e.what());
    }
    if (std::isfinite(r.n) && 2.0 * r.n > base.n_fock)
      detail::add_flag(r.flags, "cutoff");
  };

  if (method != ScanMethod::kDMRG) {
    for (int i = 0; i < npts; ++i) closed_point(i);
    return;
  }

  // DMRG: two warm-started chains (g ascending and descending); keep the
  // lower-energy branch per point.
  DMRGConfig cfg = opt.dmrg;
  cfg.enforce_cutoff = false;
  cfg.throw_on_no_convergence = false;
  struct Branch {
    double energy = std::numeric_limits<double>::quiet_NaN();
    double n = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    bool converged = false;
    MPSState state;
  };
  std::vector<Branch> fwd(npts), bwd(npts);
  auto run_chain = [&](bool forward, std::vector<Branch>& res) {
    MPSState warm;
    bool have_warm = false;
    for (int k = 0; k < npts; ++k) {
      const int i = forward ? k : npts - 1 - k;
      ModelParams p = base;
      p.delta = delta;
      p.g = gs[i];
      try {
        DMRGResult d =
            dmrg_ground_state(p, cfg, have_warm ? &warm : nullptr);
        res[i].energy = d.energy;
        res[i].n = d.n_mean;
        res[i].ok = true;
        res[i].converged = d.converged;
        res[i].state = d.state;
        warm = res[i].state;
        have_warm = true;
      } catch (const Error&) {
        res[i].ok = false;
        have_warm = false;
      }
    }
  };
  run_chain(true, fwd);
  run_chain(false, bwd);
  for (int i = 0; i < npts; ++i) {
    ScanRow& r = out[i];
    const Branch* pick = nullptr;
    if (fwd[i].ok && bwd[i].ok)
      pick = fwd[i].energy <= bwd[i].energy ? &fwd[i] : &bwd[i];
    else if (fwd[i].ok)
      pick = &fwd[i];
    else if (bwd[i].ok)
      pick = &bwd[i];
    if (!pick) {
      detail::add_flag(r.flags, "error:NoConvergence");
      continue;
    }
    r.energy = pick->energy;
    r.n = pick->n;
    if (!pick->converged) detail::add_flag(r.flags, "error:NoConvergence");
    if (fwd[i].ok && bwd[i].ok && std::abs(fwd[i].n - bwd[i].n) > 1e-7)
      detail::add_flag(r.flags, "hysteresis");
    if (2.0 * r.n > base.n_fock) detail::add_flag(r.flags, "cutoff");
    if (opt.compute_chi) {
      ModelParams p = base;
      p.delta = delta;
      p.g = gs[i];
      const int ref =
          opt.correlation_ref > 0 ? opt.correlation_ref : (p.n_sites + 1) / 2;
      try {
        ObservableSet obs = mps_observables(pick->state, p, ref);
        std::vector<std::pair<double, double>> prof;
        for (int j = 0; j < p.n_sites; ++j)
          if (j != ref - 1)
            prof.emplace_back(std::abs(j - (ref - 1)), obs.czz(ref - 1, j));
        r.chi = correlation_length(prof);
      } catch (const Error&) {
        // chi stays NaN: profile too flat or too short at this point
      }
    }
  }
}

}  // namespace detail

inline ScanTable scan_order_parameter(const std::vector<double>& deltas,
                                      double g_lo, double g_hi, double g_step,
                                      const ModelParams& p_base,
                                      ScanMethod method,
                                      const ScanOptions& opt = {}) {
  if (deltas.empty()) throw InvalidParams("scan: no delta values");
  const std::vector<double> gs = detail::g_grid(g_lo, g_hi, g_step);
  if (method == ScanMethod::kED) {
    ModelParams probe = p_base;
    probe.delta = deltas[0];
    probe.g = g_lo;
    hilbert_dimension(probe); // size guard up front
  }
  ScanTable t;
  t.g_step = g_step;
  t.deltas = deltas;
  t.n_sites = p_base.n_sites;
  t.n_fock = p_base.n_fock;
  t.max_bond = opt.dmrg.max_bond;
  const int nb = int(deltas.size());
  std::vector<std::vector<ScanRow>> blocks(nb);
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || nb == 1) {
    for (int b = 0; b < nb; ++b)
      detail::scan_delta_block(deltas[b], gs, p_base, method, opt, blocks[b]);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(jobs, nb);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < nb; b = next.fetch_add(1))
          detail::scan_delta_block(deltas[b], gs, p_base, method, opt,
                                   blocks[b]);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& b : blocks)
    t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

// Appends dn/dg per (method, delta) block: central differences inside, one-
// sided at the ends.  The grid must be uniform.
inline ScanTable numerical_derivative(const ScanTable& in) {
  ScanTable out = in;
  std::map<std::pair<std::string, double>, std::vector<int>> blocks;
  for (int i = 0; i < int(out.rows.size()); ++i)
    blocks[{out.rows[i].method, out.rows[i].delta}].push_back(i);
  for (auto& [key, idx] : blocks) {
    const int m = int(idx.size());
    if (m < 2) continue;
    const double h = out.rows[idx[1]].g - out.rows[idx[0]].g;
    if (!(h > 0)) throw NonUniformGrid("derivative: g not increasing");
    for (int k = 0; k + 1 < m; ++k) {
      const double hk = out.rows[idx[k + 1]].g - out.rows[idx[k]].g;
      if (std::abs(hk - h) > 1e-9 * std::max(1.0, h))
        throw NonUniformGrid("derivative: non-uniform g grid");
    }
    auto nv = [&](int k) { return out.rows[idx[k]].n; };
    for (int k = 0; k < m; ++k) {
      double d;
      if (k == 0) d = (nv(1) - nv(0)) / h;
      else if (k == m - 1) d = (nv(m - 1) - nv(m - 2)) / h;
      else d = (nv(k + 1) - nv(k - 1)) / (2 * h);
      out.rows[idx[k]].dn_dg = d;
    }
  }
  return out;
}

struct DerivativePeak {
  double g_peak = 0.0;
  double height = 0.0;
  double chi_at_peak = std::numeric_limits<double>::quiet_NaN();
};

// Highest dn/dg row of one (method, delta) block, 3-point parabolic
// refinement when both neighbours are usable.  Rows flagged `cutoff` or
// carrying errors are excluded, as are their NaN derivatives.  The method
// match is case-insensitive, like scan_method_from_string.
inline std::optional<DerivativePeak> derivative_peak(const ScanTable& t,
                                                     const std::string& method,
                                                     double delta) {
  auto fold = [](std::string s) {
    for (char& ch : s) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  const std::string want = fold(method);
  std::vector<int> idx;
  for (int i = 0; i < int(t.rows.size()); ++i) {
    const ScanRow& r = t.rows[i];
    if (fold(r.method) == want && r.delta == delta) idx.push_back(i);
  }
  int best = -1;
  double bestv = -std::numeric_limits<double>::infinity();
  auto usable = [&](int k) {
    const ScanRow& r = t.rows[idx[k]];
    return std::isfinite(r.dn_dg) && r.flags.find("cutoff") == std::string::npos &&
           r.flags.find("error") == std::string::npos;
  };
  for (int k = 0; k < int(idx.size()); ++k)
    if (usable(k) && t.rows[idx[k]].dn_dg > bestv) {
      bestv = t.rows[idx[k]].dn_dg;
      best = k;
    }
  if (best < 0) return std::nullopt;
  DerivativePeak pk;
  pk.g_peak = t.rows[idx[best]].g;
  pk.height = bestv;
  pk.chi_at_peak = t.rows[idx[best]].chi;
  if (best > 0 && best + 1 < int(idx.size()) && usable(best - 1) &&
      usable(best + 1)) {
    const double dm = t.rows[idx[best - 1]].dn_dg;
    const double d0 = t.rows[idx[best]].dn_dg;
    const double dp = t.rows[idx[best + 1]].dn_dg;
    const double h = t.rows[idx[best + 1]].g - t.rows[idx[best]].g;
    const double curv = dm - 2 * d0 + dp;
    if (curv < 0) {
      pk.g_peak += 0.5 * h * (dm - dp) / curv;
      pk.height = d0 - (dm - dp) * (dm - dp) / (8 * curv);
    }
  }
  return pk;
}

// ---- CSV serialization ---------------------------------------------------

inline std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void to_csv(const ScanTable& t, std::ostream& os) {
  os << "# g_step=" << format_g17(t.g_step) << " n_sites=" << t.n_sites
     << " n_fock=" << t.n_fock << " max_bond=" << t.max_bond << " deltas=";
  for (std::size_t i = 0; i < t.deltas.size(); ++i)
    os << (i ? "," : "") << format_g17(t.deltas[i]);
  os << "\n";
  os << "delta,g,method,energy,n,dn_dg,chi,flags\n";
  for (const ScanRow& r : t.rows)
    os << format_g17(r.delta) << ',' << format_g17(r.g) << ',' << r.method
       << ',' << format_g17(r.energy) << ',' << format_g17(r.n) << ','
       << format_g17(r.dn_dg) << ',' << format_g17(r.chi) << ',' << r.flags
       << "\n";
}

inline ScanTable from_csv(std::istream& is) {
  ScanTable t;
  std::string line;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string tok;
      while (ms >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "g_step") t.g_step = std::stod(val);
        else if (key == "n_sites") t.n_sites = std::stoi(val);
        else if (key == "n_fock") t.n_fock = std::stoi(val);
        else if (key == "max_bond") t.max_bond = std::stoi(val);
        else if (key == "deltas") {
          std::istringstream ds(val);
          std::string d;
          while (std::getline(ds, d, ',')) t.deltas.push_back(std::stod(d));
        }
      }
      continue;
    }
    if (!seen_header) {
      if (line != "delta,g,method,energy,n,dn_dg,chi,flags")
        throw ConfigParseError("scan csv: unexpected header: " + line);
      seen_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string f[8];
    for (int k = 0; k < 8; ++k)
      if (!std::getline(ls, f[k], ',') && k < 7)
        throw ConfigParseError("scan csv: short row: " + line);
    ScanRow r;
    r.delta = std::stod(f[0]);
    r.g = std::stod(f[1]);
    r.method = f[2];
    r.energy = std::stod(f[3]);
    r.n = std::stod(f[4]);
    r.dn_dg = std::stod(f[5]);
    r.chi = std::stod(f[6]);
    r.flags = f[7];
    t.rows.push_back(r);
  }
  if (!seen_header) throw ConfigParseError("scan csv: missing header");
  return t;
}

}  // namespace irlat
