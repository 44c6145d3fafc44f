#pragma once
// Run configuration: a versioned key = value text format covering the model,
// the DMRG solver, the scan grid, the ion-chain spec, and output routing.
// Unknown keys are hard errors (named, with line number) so typos cannot
// silently fall back to defaults.  parse(serialize(c)) == c.

#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "irlat/dmrg.hpp"
#include "irlat/errors.hpp"
#include "irlat/ionplan.hpp"
#include "irlat/model.hpp"

namespace irlat {

inline constexpr int kConfigSchemaVersion = 1;

struct ScanGrid {
  std::vector<double> deltas = {1.0};
  double g_lo = 0.0;
  double g_hi = 2.0;
  double g_step = 0.02;
  std::string method = "dmrg";  // ed | bo | sh | dmrg
  bool compute_chi = false;
  friend bool operator==(const ScanGrid&, const ScanGrid&) = default;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  ModelParams model;
  DMRGConfig dmrg;
  ScanGrid scan;
  std::string ion_species = "9Be+";
  IonChainSpec ion;
  int ed_k = 4;            // eigenpairs requested by the ed subcommand
  int jobs = 1;
  std::string output_path; // empty = stdout
  std::string output_format = "json";  // json | csv
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace cfgdet {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigParseError("invalid numeric value '" + v + "' (line " +
                           std::to_string(line) + ")");
  }
}

inline long long to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigParseError("invalid integer value '" + v + "' (line " +
                           std::to_string(line) + ")");
  }
}

inline std::uint64_t to_uint64(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const std::uint64_t x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigParseError("invalid unsigned value '" + v + "' (line " +
                           std::to_string(line) + ")");
  }
}

inline bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigParseError("invalid boolean value '" + v + "' (line " +
                         std::to_string(line) + ")");
}

inline std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, line));
  }
  if (out.empty())
    throw ConfigParseError("empty list value (line " + std::to_string(line) +
                           ")");
  return out;
}

inline std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + num(v[i]);
  return out;
}

}  // namespace cfgdet

inline void apply_config_key(RunConfig& c, const std::string& key,
                             const std::string& val, int line) {
  using namespace cfgdet;
  if (key == "schema_version") {
    if (to_int(val, line) != kConfigSchemaVersion)
      throw ConfigParseError("unsupported schema_version '" + val +
                             "' (line " + std::to_string(line) + ")");
  } else if (key == "model.n_sites") c.model.n_sites = int(to_int(val, line));
  else if (key == "model.delta") c.model.delta = to_double(val, line);
  else if (key == "model.g") c.model.g = to_double(val, line);
  else if (key == "model.j_ising") c.model.j_ising = to_double(val, line);
  else if (key == "model.n_fock") c.model.n_fock = int(to_int(val, line));
  else if (key == "dmrg.max_bond") c.dmrg.max_bond = int(to_int(val, line));
  else if (key == "dmrg.n_sweeps") c.dmrg.n_sweeps = int(to_int(val, line));
  else if (key == "dmrg.energy_tol") c.dmrg.energy_tol = to_double(val, line);
  else if (key == "dmrg.svd_floor") c.dmrg.svd_floor = to_double(val, line);
  else if (key == "dmrg.seed") c.dmrg.seed = to_uint64(val, line);
  else if (key == "scan.deltas") c.scan.deltas = to_list(val, line);
  else if (key == "scan.g_lo") c.scan.g_lo = to_double(val, line);
  else if (key == "scan.g_hi") c.scan.g_hi = to_double(val, line);
  else if (key == "scan.g_step") c.scan.g_step = to_double(val, line);
  else if (key == "scan.method") c.scan.method = val;
  else if (key == "scan.compute_chi") c.scan.compute_chi = to_bool(val, line);
  else if (key == "ion.n_ions") c.ion.n_ions = int(to_int(val, line));
  else if (key == "ion.spacing_d0") c.ion.spacing_d0 = to_double(val, line);
  else if (key == "ion.species") {
    c.ion_species = val;
    c.ion.ion_mass = ion_mass_from_species(val);
  } else if (key == "ion.omega_z") c.ion.omega_z = to_double(val, line);
  else if (key == "ion.omega_x_pattern")
    c.ion.omega_x_pattern = to_list(val, line);
  else if (key == "ion.lambda_axial")
    c.ion.laser_wavelength_axial = to_double(val, line);
  else if (key == "ion.lambda_transverse")
    c.ion.laser_wavelength_transverse = to_double(val, line);
  else if (key == "ion.gz") c.ion.gz_force = to_double(val, line);
  else if (key == "ion.gx") c.ion.gx_force = to_double(val, line);
  else if (key == "ion.detuning_factor")
    c.ion.axial_detuning_factor = to_double(val, line);
  else if (key == "ed.k") c.ed_k = int(to_int(val, line));
  else if (key == "jobs") c.jobs = int(to_int(val, line));
  else if (key == "output.path") c.output_path = val;
  else if (key == "output.format") {
    if (val != "json" && val != "csv")
      throw ConfigParseError("output.format must be json or csv (line " +
                             std::to_string(line) + ")");
    c.output_format = val;
  } else {
    throw ConfigParseError("unknown config key '" + key + "' (line " +
                           std::to_string(line) + ")");
  }
}

inline RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = cfgdet::trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("expected key = value (line " +
                             std::to_string(line) + ")");
    const std::string key = cfgdet::trim(s.substr(0, eq));
    const std::string val = cfgdet::trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigParseError("empty key (line " + std::to_string(line) + ")");
    apply_config_key(c, key, val, line);
  }
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline void serialize_config(const RunConfig& c, std::ostream& os) {
  using namespace cfgdet;
  os << "schema_version = " << kConfigSchemaVersion << "\n"
     << "model.n_sites = " << c.model.n_sites << "\n"
     << "model.delta = " << num(c.model.delta) << "\n"
     << "model.g = " << num(c.model.g) << "\n"
     << "model.j_ising = " << num(c.model.j_ising) << "\n"
     << "model.n_fock = " << c.model.n_fock << "\n"
     << "dmrg.max_bond = " << c.dmrg.max_bond << "\n"
     << "dmrg.n_sweeps = " << c.dmrg.n_sweeps << "\n"
     << "dmrg.energy_tol = " << num(c.dmrg.energy_tol) << "\n"
     << "dmrg.svd_floor = " << num(c.dmrg.svd_floor) << "\n"
     << "dmrg.seed = " << c.dmrg.seed << "\n"
     << "scan.deltas = " << list(c.scan.deltas) << "\n"
     << "scan.g_lo = " << num(c.scan.g_lo) << "\n"
     << "scan.g_hi = " << num(c.scan.g_hi) << "\n"
     << "scan.g_step = " << num(c.scan.g_step) << "\n"
     << "scan.method = " << c.scan.method << "\n"
     << "scan.compute_chi = " << (c.scan.compute_chi ? "true" : "false")
     << "\n"
     << "ion.n_ions = " << c.ion.n_ions << "\n"
     << "ion.spacing_d0 = " << num(c.ion.spacing_d0) << "\n"
     << "ion.species = " << c.ion_species << "\n"
     << "ion.omega_z = " << num(c.ion.omega_z) << "\n"
     << "ion.omega_x_pattern = " << list(c.ion.omega_x_pattern) << "\n"
     << "ion.lambda_axial = " << num(c.ion.laser_wavelength_axial) << "\n"
     << "ion.lambda_transverse = " << num(c.ion.laser_wavelength_transverse)
     << "\n"
     << "ion.gz = " << num(c.ion.gz_force) << "\n"
     << "ion.gx = " << num(c.ion.gx_force) << "\n"
     << "ion.detuning_factor = " << num(c.ion.axial_detuning_factor) << "\n"
     << "ed.k = " << c.ed_k << "\n"
     << "jobs = " << c.jobs << "\n"
     << "output.path = " << c.output_path << "\n"
     << "output.format = " << c.output_format << "\n";
}

inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  serialize_config(c, os);
  return os.str();
}

}  // namespace irlat
