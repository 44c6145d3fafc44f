// Command-line front end: one binary, one subcommand per solver plus the
// scan/fit drivers, the ion-chain planner, and dataset reproduction.
// Outputs are JSON (solvers, fits, planner) or CSV (scans); all file writes
// are atomic (temp + rename).  Exit codes: 0 success, 1 solver/runtime
// failure, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irlat/analysis.hpp"
#include "irlat/config.hpp"
#include "irlat/dmrg.hpp"
#include "irlat/exact.hpp"
#include "irlat/ionplan.hpp"
#include "irlat/model.hpp"
#include "irlat/perturbative.hpp"
#include "irlat/variational.hpp"

using json = nlohmann::ordered_json;
using namespace irlat;

namespace {

// ---- output helpers --------------------------------------------------------

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open output file: " + tmp);
    os << content;
    if (!os.good()) {
      std::remove(tmp.c_str());
      throw Error("failed writing output file: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("failed to move output into place: " + path);
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    atomic_write(path, content);
}

std::string table_to_string(const ScanTable& t) {
  std::ostringstream os;
  to_csv(t, os);
  return os.str();
}

ScanTable table_from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open scan csv: " + path);
  return from_csv(is);
}

// ---- config plumbing -------------------------------------------------------

RunConfig load_base_config(int argc, char** argv) {
  RunConfig c;
  if (const char* env = std::getenv("RABI_LATTICE_JOBS")) {
    try {
      c.jobs = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigParseError("RABI_LATTICE_JOBS is not an integer");
    }
  }
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      std::ifstream is(argv[i + 1]);
      if (!is)
        throw ConfigParseError(std::string("cannot open config file: ") +
                               argv[i + 1]);
      const int env_jobs = c.jobs;
      c = parse_config(is);
      if (c.jobs == 1 && env_jobs != 1) c.jobs = env_jobs;
    }
  return c;
}

struct GRange {
  double lo = 0.0, hi = 0.0, step = 1.0;
};

GRange parse_g_range(const std::string& s) {
  GRange r;
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) {
    try {
      r.lo = r.hi = std::stod(s);
    } catch (const std::exception&) {
      throw ConfigParseError("invalid --g value: " + s);
    }
    r.step = 1.0;
    return r;
  }
  const auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw ConfigParseError("expected --g lo:hi:step, got: " + s);
  try {
    r.lo = std::stod(s.substr(0, c1));
    r.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    r.step = std::stod(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigParseError("invalid --g range: " + s);
  }
  return r;
}

std::vector<double> parse_delta_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ','))
    if (!item.empty()) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigParseError("invalid --delta list entry: " + item);
      }
    }
  if (out.empty()) throw ConfigParseError("empty --delta list");
  return out;
}

// ---- solver subcommands ----------------------------------------------------

json run_ed(const RunConfig& c) {
  GroundSpace gs = ground_space(c.model, std::max(2, c.ed_k));
  ResolvedGroundState r = symmetry_resolved_ground_state(c.model);
  ObservableSet o = observables(r.state, c.model);
  double elitzur = 0.0;
  for (int j = 0; j < c.model.n_sites; ++j)
    elitzur = std::max({elitzur, std::abs(o.a_site[j]), std::abs(o.sx_site[j])});
  json out;
  out["energies"] = gs.energies;
  out["n"] = o.n_mean;
  out["sigma_x"] = std::vector<double>(o.sx_site.begin(), o.sx_site.end());
  out["sigma_z"] = std::vector<double>(o.sz_site.begin(), o.sz_site.end());
  out["gap"] = r.gap;
  out["elitzur_max"] = elitzur;
  return out;
}

json run_pt(const RunConfig& c) {
  PerturbativeEnergies pe = perturbative_energies(c.model);
  json out;
  out["e_ferro"] = pe.e_ferro;
  out["e_dressed"] = pe.e_dressed;
  if (pe.crossing_g)
    out["crossing_g"] = *pe.crossing_g;
  else
    out["crossing_g"] = nullptr;
  return out;
}

json run_bo(const RunConfig& c) {
  BOResult b = minimize_bo(c.model);
  json out;
  out["alpha0"] = b.alpha0;
  out["n"] = b.n;
  out["energy"] = b.energy_per_site;
  out["critical_g"] = b.critical_g;
  return out;
}

json run_sh(const RunConfig& c) {
  SHResult s = minimize_sh(c.model);
  json out;
  out["eta0"] = s.eta0;
  out["n"] = s.n;
  out["energy"] = s.energy;
  return out;
}

json run_dmrg(const RunConfig& c, const std::string& checkpoint,
              const std::string& warm_path) {
  MPSState warm;
  const MPSState* warm_ptr = nullptr;
  if (!warm_path.empty()) {
    warm = load_mps(warm_path);
    warm_ptr = &warm;
  }
  DMRGResult r = dmrg_ground_state(c.model, c.dmrg, warm_ptr);
  if (!checkpoint.empty()) save_mps(r.state, checkpoint);
  json out;
  out["energy"] = r.energy;
  out["n"] = r.n_mean;
  out["converged"] = r.converged;
  out["sweeps"] = r.sweeps;
  out["max_discarded_weight"] = r.max_discarded;
  return out;
}

ScanTable run_scan(const RunConfig& c) {
  ScanOptions opt;
  opt.dmrg = c.dmrg;
  opt.jobs = c.jobs;
  opt.compute_chi = c.scan.compute_chi;
  ScanTable t = scan_order_parameter(
      c.scan.deltas, c.scan.g_lo, c.scan.g_hi, c.scan.g_step, c.model,
      scan_method_from_string(c.scan.method), opt);
  return numerical_derivative(t);
}

// peak + chi per delta block, shared by the two fit subcommands
struct PeakRow {
  double delta = 0.0;
  DerivativePeak peak;
  double chi = std::numeric_limits<double>::quiet_NaN();
};

std::vector<PeakRow> collect_peaks(const ScanTable& t) {
  std::vector<double> deltas;
  std::vector<std::string> methods;
  for (const auto& r : t.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (std::find(deltas.begin(), deltas.end(), r.delta) == deltas.end())
      deltas.push_back(r.delta);
  }
  if (methods.size() != 1)
    throw InvalidParams("fit input must contain exactly one method");
  std::vector<PeakRow> out;
  for (double d : deltas) {
    auto pk = derivative_peak(t, methods[0], d);
    if (!pk) continue;
    PeakRow pr;
    pr.delta = d;
    pr.peak = *pk;
    pr.chi = pk->chi_at_peak;
    if (!std::isfinite(pr.chi)) {
      // nearest row with a finite correlation length
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : t.rows)
        if (r.delta == d && std::isfinite(r.chi) &&
            std::abs(r.g - pk->g_peak) < best) {
          best = std::abs(r.g - pk->g_peak);
          pr.chi = r.chi;
        }
    }
    out.push_back(pr);
  }
  return out;
}

json run_fit_critical(const ScanTable& t, double j_ising) {
  std::vector<PeakRow> peaks = collect_peaks(t);
  std::vector<std::pair<double, double>> pts;
  json jp = json::array();
  for (const auto& pr : peaks) {
    json e;
    e["delta"] = pr.delta;
    e["g_peak"] = pr.peak.g_peak;
    e["height"] = pr.peak.height;
    jp.push_back(e);
    if (pr.delta < j_ising) pts.emplace_back(pr.delta, pr.peak.g_peak);
  }
  FitResult f = fit_critical_line(pts, j_ising);
  json out;
  out["slope"] = f.slope;
  out["intercept"] = f.intercept;
  out["r_squared"] = f.r_squared;
  out["point_count"] = f.point_count;
  out["peaks"] = jp;
  return out;
}

json run_fit_chi(const ScanTable& t) {
  std::vector<PeakRow> peaks = collect_peaks(t);
  std::vector<std::pair<double, double>> pts;
  json jp = json::array();
  for (const auto& pr : peaks) {
    if (!std::isfinite(pr.chi)) continue;
    json e;
    e["delta"] = pr.delta;
    e["chi"] = pr.chi;
    e["chi_inv"] = 1.0 / pr.chi;
    jp.push_back(e);
    pts.emplace_back(pr.delta, pr.chi);
  }
  FitResult f = fit_chi_scaling(pts);
  json out;
  out["slope"] = f.slope;
  out["intercept"] = f.intercept;
  out["r_squared"] = f.r_squared;
  out["point_count"] = f.point_count;
  out["points"] = jp;
  return out;
}

json ion_report_json(const IonPlanReport& r) {
  json out;
  out["t_axial_nn_hz"] = r.t_axial_nn;
  out["omega_com_hz"] = r.omega_com;
  out["axial_mode_frequencies_hz"] = r.axial_mode_frequencies;
  out["eta_axial"] = r.eta_axial;
  out["eta_transverse"] = r.eta_transverse;
  out["j_effective_hz"] = r.j_effective;
  out["t_transverse_max_hz"] = r.t_transverse_max;
  out["residual_same_freq_coupling_hz"] = r.residual_same_freq_coupling;
  out["rwa_ratio"] = r.rwa_ratio;
  out["adiabatic_timescale_s"] = r.adiabatic_timescale;
  out["eta_transverse_per_set"] = r.eta_transverse_per_set;
  out["rabi_relative_per_set"] = r.rabi_relative_per_set;
  json flags = json::array();
  for (const auto& f : r.feasibility_flags) {
    json e;
    e["name"] = f.name;
    e["pass"] = f.pass;
    e["detail"] = f.detail;
    flags.push_back(e);
  }
  out["feasibility_flags"] = flags;
  out["all_pass"] = r.all_pass();
  return out;
}

std::string ion_report_text(const IonPlanReport& r) {
  std::ostringstream os;
  os << "ion chain feasibility report\n"
     << "  t_axial_nn              = " << r.t_axial_nn / 1e3 << " kHz\n"
     << "  omega_com (soft mode)   = " << r.omega_com / 1e3 << " kHz\n"
     << "  eta_axial               = " << r.eta_axial << "\n"
     << "  eta_transverse (max)    = " << r.eta_transverse << "\n"
     << "  j_effective             = " << r.j_effective / 1e3 << " kHz\n"
     << "  t_transverse_max        = " << r.t_transverse_max / 1e3 << " kHz\n"
     << "  residual same-frequency = " << r.residual_same_freq_coupling
     << " Hz\n"
     << "  rwa_ratio               = " << r.rwa_ratio << "\n"
     << "  adiabatic timescale     = " << r.adiabatic_timescale * 1e6
     << " us\n";
  for (const auto& f : r.feasibility_flags)
    os << "  [" << (f.pass ? "PASS" : "FAIL") << "] " << f.name << ": "
       << f.detail << "\n";
  os << "overall: " << (r.all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

// ---- reproduce -------------------------------------------------------------

void require_long_run(bool long_run, const std::string& what) {
  if (!long_run)
    throw BudgetRefused(what +
                        " requires hours of DMRG time; pass --long-run to "
                        "acknowledge the budget");
}

ScanTable transition_scan(const RunConfig& base, int jobs) {
  RunConfig c = base;
  c.model.n_sites = 50;
  c.model.n_fock = 10;
  c.model.j_ising = 1.0;
  c.dmrg.max_bond = 10;
  c.scan.deltas = {0.3, 0.5, 0.9};
  c.scan.g_lo = 0.30;
  c.scan.g_hi = 1.20;
  c.scan.g_step = 0.02;
  c.scan.method = "dmrg";
  c.scan.compute_chi = true;
  c.jobs = jobs;
  return run_scan(c);
}

int run_reproduce(const RunConfig& base, const std::string& figure,
                  const std::string& out_dir, bool long_run,
                  const std::string& input_csv) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  auto path = [&](const std::string& name) {
    return out_dir.empty() ? name : out_dir + "/" + name;
  };
  if (figure == "fig2") {
    // variational energy landscape per site against the displacement, at
    // delta = J = 1 for couplings below/at/above the transition
    std::ostringstream os;
    os << "# bo energy landscape: n_sites->inf, delta=1, j=1; alpha in "
          "[0,3] step 0.005\n";
    os << "g,alpha,energy_per_site\n";
    for (double g : {0.6, 0.8, 1.0, 1.1, 1.3, 1.5}) {
      ModelParams p;
      p.delta = 1.0;
      p.j_ising = 1.0;
      p.g = g;
      for (int i = 0; i <= 600; ++i) {
        const double a = 0.005 * i;
        os << format_g17(g) << ',' << format_g17(a) << ','
           << format_g17(bo_energy_per_site(a, p)) << "\n";
      }
    }
    emit(path("fig2.csv"), os.str());
    return 0;
  }
  if (figure == "fig3") {
    std::ostringstream os;
    os << "# polaron-ansatz boson number: n_sites=50, j=1; g in [0,2] "
          "step 0.01\n";
    os << "delta,g,eta0,n\n";
    for (double d : {0.2, 0.5, 1.0, 2.0}) {
      ModelParams p;
      p.n_sites = 50;
      p.j_ising = 1.0;
      p.delta = d;
      for (int i = 0; i <= 200; ++i) {
        p.g = 0.01 * i;
        SHResult r = minimize_sh(p);
        os << format_g17(d) << ',' << format_g17(p.g) << ','
           << format_g17(r.eta0) << ',' << format_g17(r.n) << "\n";
      }
    }
    emit(path("fig3.csv"), os.str());
    return 0;
  }
  if (figure == "fig4" || figure == "fig5") {
    ScanTable t;
    if (!input_csv.empty()) {
      t = table_from_file(input_csv);
      t = numerical_derivative(t);
    } else {
      require_long_run(long_run, figure);
      t = transition_scan(base, base.jobs);
    }
    if (figure == "fig4") {
      emit(path("fig4.csv"), table_to_string(t));
    } else {
      std::ostringstream os;
      os << "# derivative of the boson number along g per delta block\n";
      os << "delta,g,dn_dg\n";
      for (const auto& r : t.rows)
        os << format_g17(r.delta) << ',' << format_g17(r.g) << ','
           << format_g17(r.dn_dg) << "\n";
      emit(path("fig5.csv"), os.str());
    }
    return 0;
  }
  if (figure == "fig6") {
    ScanTable t;
    if (!input_csv.empty()) {
      t = table_from_file(input_csv);
      t = numerical_derivative(t);
    } else {
      require_long_run(long_run, figure);
      t = transition_scan(base, base.jobs);
    }
    std::vector<PeakRow> peaks = collect_peaks(t);
    std::ostringstream os;
    os << "# z-correlation profile from the center site at the per-delta "
          "transition point\n";
    os << "delta,g,separation,abs_czz\n";
    for (const auto& pr : peaks) {
      ModelParams p = base.model;
      p.n_sites = t.n_sites > 0 ? t.n_sites : 50;
      p.n_fock = t.n_fock > 0 ? t.n_fock : 10;
      p.j_ising = 1.0;
      p.delta = pr.delta;
      p.g = pr.peak.g_peak;
      DMRGConfig cfg = base.dmrg;
      cfg.max_bond = t.max_bond > 0 ? t.max_bond : 10;
      cfg.enforce_cutoff = false;
      cfg.throw_on_no_convergence = false;
      DMRGResult d = dmrg_ground_state(p, cfg);
      const int ref = (p.n_sites + 1) / 2;
      ObservableSet o = mps_observables(d.state, p, ref);
      for (int j = 0; j < p.n_sites; ++j)
        if (j != ref - 1)
          os << format_g17(pr.delta) << ',' << format_g17(p.g) << ','
             << std::abs(j - (ref - 1)) << ','
             << format_g17(std::abs(o.czz(ref - 1, j))) << "\n";
    }
    emit(path("fig6.csv"), os.str());
    return 0;
  }
  if (figure == "fig7") {
    ScanTable t;
    if (!input_csv.empty()) {
      t = table_from_file(input_csv);
      t = numerical_derivative(t);
    } else {
      require_long_run(long_run, figure);
      t = transition_scan(base, base.jobs);
    }
    emit(path("fig7.json"), run_fit_chi(t).dump(2) + "\n");
    return 0;
  }
  if (figure == "table_vi") {
    IonPlanReport r = feasibility_report(RunConfig{}.ion);
    emit(path("table_vi.json"), ion_report_json(r).dump(2) + "\n");
    return 0;
  }
  throw ConfigParseError("unknown figure: " + figure);
}

// ---- main ------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  RunConfig base = load_base_config(argc, argv);

  CLI::App app{"ground-state phase diagram tools for a spin-boson chain"};
  app.require_subcommand(1);
  std::string config_path; // consumed by load_base_config; declared for help
  app.add_option("--config", config_path, "key = value configuration file");

  RunConfig c = base;
  std::string g_spec, delta_spec, out_path = base.output_path;
  std::string checkpoint, warm_path, input_csv, figure, out_dir;
  bool long_run = false;

  auto add_model = [&](CLI::App* s, bool with_g_range) {
    s->add_option("--n-sites", c.model.n_sites, "number of chain sites");
    s->add_option("--n-fock", c.model.n_fock, "oscillator levels per site");
    s->add_option("--j", c.model.j_ising, "Ising exchange");
    if (with_g_range) {
      s->add_option("--delta", delta_spec, "comma list of detunings");
      s->add_option("--g", g_spec, "coupling range lo:hi:step");
    } else {
      s->add_option("--delta", c.model.delta, "oscillator detuning");
      s->add_option("--g", c.model.g, "qubit-oscillator coupling");
    }
    s->add_option("--out", out_path, "output file (default stdout)");
  };
  auto add_dmrg = [&](CLI::App* s) {
    s->add_option("--max-bond", c.dmrg.max_bond, "bond dimension cap");
    s->add_option("--sweeps", c.dmrg.n_sweeps, "sweep cap");
    s->add_option("--energy-tol", c.dmrg.energy_tol, "per-sweep energy tol");
    s->add_option("--seed", c.dmrg.seed, "solver seed");
  };

  CLI::App* ed = app.add_subcommand("ed", "dense/Lanczos exact ground state");
  add_model(ed, false);
  ed->add_option("--k", c.ed_k, "number of eigenpairs");

  CLI::App* pt = app.add_subcommand("pt", "second-order energy branches");
  add_model(pt, false);

  CLI::App* bo = app.add_subcommand("bo", "displaced-oscillator ansatz");
  add_model(bo, false);

  CLI::App* sh = app.add_subcommand("sh", "polaron ansatz");
  add_model(sh, false);

  CLI::App* dm = app.add_subcommand("dmrg", "two-site MPS ground state");
  add_model(dm, false);
  add_dmrg(dm);
  dm->add_option("--checkpoint", checkpoint, "write MPS checkpoint here");
  dm->add_option("--warm-start", warm_path, "read MPS checkpoint as start");

  CLI::App* sc = app.add_subcommand("scan", "order-parameter scan over (delta,g)");
  add_model(sc, true);
  add_dmrg(sc);
  sc->add_option("--method", c.scan.method, "ed | bo | sh | dmrg");
  sc->add_flag("--chi", c.scan.compute_chi, "fit correlation length per point");
  sc->add_option("--jobs", c.jobs, "delta blocks solved in parallel");

  CLI::App* fc = app.add_subcommand("fit-critical", "log-log critical-line fit");
  fc->add_option("--input-csv", input_csv, "scan csv")->required();
  fc->add_option("--j", c.model.j_ising, "Ising exchange");
  fc->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* fx = app.add_subcommand("fit-chi", "inverse correlation-length fit");
  fx->add_option("--input-csv", input_csv, "scan csv with chi column")->required();
  fx->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* ion = app.add_subcommand("ion-plan", "microtrap feasibility report");
  ion->add_option("--n-ions", c.ion.n_ions, "chain length");
  ion->add_option("--spacing", c.ion.spacing_d0, "trap spacing (m)");
  ion->add_option("--omega-z", c.ion.omega_z, "axial trap frequency (Hz)");
  ion->add_option("--gz", c.ion.gz_force, "axial drive coupling (Hz)");
  ion->add_option("--gx", c.ion.gx_force, "transverse drive coupling (Hz)");
  ion->add_option("--detuning-factor", c.ion.axial_detuning_factor,
                  "delta_z / g_z");
  ion->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* rp = app.add_subcommand("reproduce", "emit a published dataset");
  rp->add_option("figure", figure, "fig2..fig7 or table_vi")->required();
  rp->add_option("--out-dir", out_dir, "directory for dataset files");
  rp->add_flag("--long-run", long_run, "acknowledge multi-hour DMRG budget");
  rp->add_option("--input-csv", input_csv, "reuse an existing scan csv");
  rp->add_option("--jobs", c.jobs, "delta blocks solved in parallel");

  // --config is consumed by load_base_config before CLI11 runs; register it
  // on every subcommand too so it is accepted in either position
  for (CLI::App* s : app.get_subcommands([](const CLI::App*) { return true; }))
    s->add_option("--config", config_path, "key = value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (!delta_spec.empty()) c.scan.deltas = parse_delta_list(delta_spec);
  if (!g_spec.empty()) {
    const GRange r = parse_g_range(g_spec);
    c.scan.g_lo = r.lo;
    c.scan.g_hi = r.hi;
    c.scan.g_step = r.step;
  }

  if (ed->parsed()) {
    emit(out_path, run_ed(c).dump(2) + "\n");
  } else if (pt->parsed()) {
    emit(out_path, run_pt(c).dump(2) + "\n");
  } else if (bo->parsed()) {
    emit(out_path, run_bo(c).dump(2) + "\n");
  } else if (sh->parsed()) {
    emit(out_path, run_sh(c).dump(2) + "\n");
  } else if (dm->parsed()) {
    emit(out_path, run_dmrg(c, checkpoint, warm_path).dump(2) + "\n");
  } else if (sc->parsed()) {
    emit(out_path, table_to_string(run_scan(c)));
  } else if (fc->parsed()) {
    emit(out_path,
         run_fit_critical(table_from_file(input_csv), c.model.j_ising).dump(2) +
             "\n");
  } else if (fx->parsed()) {
    emit(out_path, run_fit_chi(table_from_file(input_csv)).dump(2) + "\n");
  } else if (ion->parsed()) {
    c.ion.ion_mass = ion_mass_from_species(c.ion_species);
    IonPlanReport r = feasibility_report(c.ion);
    const std::string text = ion_report_text(r);
    emit(out_path, ion_report_json(r).dump(2) + "\n");
    if (out_path.empty())
      std::cerr << text;
    else
      std::cout << text;
  } else if (rp->parsed()) {
    return run_reproduce(c, figure, out_dir, long_run, input_csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
