#pragma once
// Microtrap-array feasibility planner: Coulomb-mediated phonon hoppings
// between ions pinned in individual traps, axial normal-mode band,
// Lamb-Dicke parameters, effective spin-spin exchange, and the residual /
// rotating-wave error ratios, assembled into a pass/fail report.
//
// Frequencies are stored as ordinary frequencies nu (the quantity usually
// quoted as "x (2pi) kHz"); angular frequencies 2*pi*nu appear only inside
// formulas.  All geometry is SI.  The Coulomb factor e^2/(4*pi*eps0) can be
// evaluated through either an SI or a Gaussian-units route; both must agree
// to ~1e-10, which guards the bookkeeping.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "irlat/errors.hpp"

namespace irlat {

namespace phys {
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kSpeedOfLight = 2.99792458e8;   // m/s
inline constexpr double kPi = 3.14159265358979323846;
}  // namespace phys

enum class CoulombConvention { kSI, kGaussian };

// e^2/(4*pi*eps0) in J*m.  The Gaussian route converts the charge to statC
// (where the Coulomb constant is 1) and the resulting erg*cm back to J*m.
inline double coulomb_e2(CoulombConvention c = CoulombConvention::kSI) {
  using namespace phys;
  if (c == CoulombConvention::kSI)
    return kElementaryCharge * kElementaryCharge /
           (4.0 * kPi * kVacuumPermittivity);
  const double e_statc = kElementaryCharge * (kSpeedOfLight * 10.0);
  return e_statc * e_statc * 1e-9;  // erg*cm -> J*m
}

inline double ion_mass_from_species(const std::string& label) {
  if (label == "9Be+") return 9.0121831 * phys::kAtomicMassUnit;
  throw InvalidParams("unknown ion species: " + label);
}

enum class IonAxis { kX, kZ };

struct IonChainSpec {
  int n_ions = 50;
  double spacing_d0 = 30e-6;                       // m
  double ion_mass = ion_mass_from_species("9Be+"); // kg
  double omega_z = 500e3;                          // Hz (nu)
  std::vector<double> omega_x_pattern = {10e6, 9e6, 8e6};  // Hz, tiled
  double laser_wavelength_axial = 870e-9;          // m
  double laser_wavelength_transverse = 320e-9;     // m
  double gz_force = 100e3;                         // Hz
  double gx_force = 100e3;                         // Hz
  double axial_detuning_factor = 2.0;              // delta_z / g_z
  CoulombConvention convention = CoulombConvention::kSI;

  void validate() const {
    if (n_ions < 2) throw InvalidParams("ion chain needs >= 2 ions");
    if (!(spacing_d0 > 0)) throw InvalidParams("trap spacing must be > 0");
    if (!(ion_mass > 0)) throw InvalidParams("ion mass must be > 0");
    if (!(omega_z > 0)) throw InvalidParams("axial frequency must be > 0");
    if (omega_x_pattern.empty())
      throw InvalidParams("transverse frequency pattern is empty");
    for (std::size_t a = 0; a < omega_x_pattern.size(); ++a) {
      if (!(omega_x_pattern[a] > 0))
        throw InvalidParams("transverse frequencies must be > 0");
      for (std::size_t b = a + 1; b < omega_x_pattern.size(); ++b)
        if (omega_x_pattern[a] == omega_x_pattern[b])
          throw InvalidParams("transverse pattern entries must be distinct");
    }
    if (!(laser_wavelength_axial > 0) || !(laser_wavelength_transverse > 0))
      throw InvalidParams("laser wavelengths must be > 0");
    if (!(axial_detuning_factor > 0))
      throw InvalidParams("axial detuning factor must be > 0");
  }
  friend bool operator==(const IonChainSpec&, const IonChainSpec&) = default;
};

// Local trap frequency seen by ion i (1-based) along the given axis, Hz.
inline double local_frequency(const IonChainSpec& s, IonAxis axis, int i) {
  if (i < 1 || i > s.n_ions) throw IndexOutOfRange("ion index out of range");
  if (axis == IonAxis::kZ) return s.omega_z;
  return s.omega_x_pattern[std::size_t(i - 1) % s.omega_x_pattern.size()];
}

// Dipolar phonon hopping t^alpha_{i,l} in Hz (signed; c_x = 1, c_z = -2):
//   t = c_alpha * e^2/(4 pi eps0) / (2 m sqrt(w_i w_l) (|i-l| d0)^3)
// with w the angular frequencies.
inline double hopping_strength(const IonChainSpec& s, IonAxis axis, int i,
                               int l) {
  s.validate();
  if (i == l) throw SameIonIndex("hopping requires two distinct ions");
  if (i < 1 || i > s.n_ions || l < 1 || l > s.n_ions)
    throw IndexOutOfRange("ion index out of range");
  const double c_alpha = axis == IonAxis::kX ? 1.0 : -2.0;
  const double wi = 2.0 * phys::kPi * local_frequency(s, axis, i);
  const double wl = 2.0 * phys::kPi * local_frequency(s, axis, l);
  const double r = std::abs(i - l) * s.spacing_d0;
  const double t_rad = c_alpha * coulomb_e2(s.convention) /
                       (2.0 * s.ion_mass * std::sqrt(wi * wl) * r * r * r);
  return t_rad / (2.0 * phys::kPi);
}

// Axial normal-mode frequencies in Hz, ascending: eigenvalues of the N x N
// matrix with omega_z on the diagonal and t^z_{j,l} for every pair.  The
// negative axial hoppings push the band below omega_z, so the first entry
// is the soft mode used for the spin-dependent drive.
inline std::vector<double> axial_spectrum(const IonChainSpec& s) {
  s.validate();
  const int n = s.n_ions;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = s.omega_z;
    for (int l = i + 1; l < n; ++l) {
      const double t = hopping_strength(s, IonAxis::kZ, i + 1, l + 1);
      a(i, l) = t;
      a(l, i) = t;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

// eta = (2 pi / lambda) * sqrt(hbar / (2 m * 2 pi nu)).
inline double lamb_dicke(double wavelength_m, double mass_kg,
                         double omega_hz) {
  if (!(wavelength_m > 0) || !(mass_kg > 0) || !(omega_hz > 0))
    throw InvalidParams("lamb_dicke: all arguments must be > 0");
  const double k = 2.0 * phys::kPi / wavelength_m;
  return k * std::sqrt(phys::kHbar /
                       (2.0 * mass_kg * 2.0 * phys::kPi * omega_hz));
}

// J = |t^z_nn| (g_z / delta_z)^2 with delta_z = axial_detuning_factor * g_z,
// i.e. |t^z_nn| / factor^2.  Hz.
inline double effective_exchange(const IonChainSpec& s) {
  s.validate();
  if (s.gz_force == 0.0) return 0.0;
  const double t_nn = std::abs(hopping_strength(s, IonAxis::kZ, 1, 2));
  return t_nn / (s.axial_detuning_factor * s.axial_detuning_factor);
}

struct FeasibilityFlag {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct IonPlanReport {
  double t_axial_nn = 0.0;                  // Hz, signed (c_z = -2)
  std::vector<double> axial_mode_frequencies;  // Hz, ascending
  double omega_com = 0.0;                   // Hz, lowest axial mode
  double eta_axial = 0.0;
  double eta_transverse = 0.0;              // max over the pattern
  double j_effective = 0.0;                 // Hz
  double t_transverse_max = 0.0;            // Hz, max adjacent |t^x|
  double residual_same_freq_coupling = 0.0; // Hz, |t^x| at pattern period
  double rwa_ratio = 0.0;                   // max |t^x| / |delta omega|
  double adiabatic_timescale = 0.0;         // s, 1/(2 pi J)
  std::vector<double> eta_transverse_per_set;
  std::vector<double> rabi_relative_per_set;  // Omega propto 1/eta, set 1 = 1
  std::vector<FeasibilityFlag> feasibility_flags;

  bool all_pass() const {
    for (const auto& f : feasibility_flags)
      if (!f.pass) return false;
    return true;
  }
};

inline IonPlanReport feasibility_report(const IonChainSpec& s) {
  s.validate();
  IonPlanReport r;
  r.t_axial_nn = hopping_strength(s, IonAxis::kZ, 1, 2);
  r.axial_mode_frequencies = axial_spectrum(s);
  r.omega_com = r.axial_mode_frequencies.front();
  r.eta_axial = lamb_dicke(s.laser_wavelength_axial, s.ion_mass, r.omega_com);
  for (double w : s.omega_x_pattern) {
    const double eta = lamb_dicke(s.laser_wavelength_transverse, s.ion_mass, w);
    r.eta_transverse_per_set.push_back(eta);
  }
  for (double eta : r.eta_transverse_per_set)
    r.rabi_relative_per_set.push_back(r.eta_transverse_per_set.front() / eta);
  r.eta_transverse = *std::max_element(r.eta_transverse_per_set.begin(),
                                       r.eta_transverse_per_set.end());
  r.j_effective = effective_exchange(s);

  const int period = int(s.omega_x_pattern.size());
  double tmax = 0.0, resid = 0.0, rwa = 0.0;
  for (int j = 1; j <= s.n_ions; ++j) {
    if (j + 1 <= s.n_ions)
      tmax = std::max(tmax,
                      std::abs(hopping_strength(s, IonAxis::kX, j, j + 1)));
    if (j + period <= s.n_ions)
      resid = std::max(
          resid, std::abs(hopping_strength(s, IonAxis::kX, j, j + period)));
    for (int d = 1; d < period && j + d <= s.n_ions; ++d) {
      const double now = std::abs(hopping_strength(s, IonAxis::kX, j, j + d));
      const double gap = std::abs(local_frequency(s, IonAxis::kX, j) -
                                  local_frequency(s, IonAxis::kX, j + d));
      if (gap > 0) rwa = std::max(rwa, now / gap);
    }
  }
  r.t_transverse_max = tmax;
  r.residual_same_freq_coupling = resid;
  r.rwa_ratio = rwa;
  r.adiabatic_timescale =
      r.j_effective > 0 ? 1.0 / (2.0 * phys::kPi * r.j_effective) : 0.0;

  auto flag = [&](const std::string& name, bool pass, std::string detail) {
    r.feasibility_flags.push_back({name, pass, std::move(detail)});
  };
  flag("lamb_dicke_axial", r.eta_axial < 0.3,
       "eta_z = " + std::to_string(r.eta_axial) + " (< 0.3 required)");
  flag("lamb_dicke_transverse", r.eta_transverse < 0.3,
       "max eta_x = " + std::to_string(r.eta_transverse) + " (< 0.3 required)");
  flag("rwa", r.rwa_ratio <= 1e-2,
       "max t^x/|dw| = " + std::to_string(r.rwa_ratio) + " (<= 1e-2 required)");
  const double scale =
      std::min({s.gx_force, s.gz_force,
                r.j_effective > 0 ? r.j_effective : s.gx_force});
  const double resid_ratio = scale > 0 ? resid / scale : 0.0;
  flag("residual_coupling", resid_ratio <= 0.05,
       "residual/min(g,J) = " + std::to_string(resid_ratio) +
           " (<= 0.05 required)");
  return r;
}

}  // namespace irlat
