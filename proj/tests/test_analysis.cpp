// Scan driver, derivative/peak extraction, fits, and CSV round-trips.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "irlat/analysis.hpp"

using namespace irlat;

namespace {

ModelParams mk(int n, double delta, double g, double j, int nf) {
  ModelParams p;
  p.n_sites = n;
  p.delta = delta;
  p.g = g;
  p.j_ising = j;
  p.n_fock = nf;
  return p;
}

ScanTable synthetic_block(const std::vector<double>& gs,
                          const std::vector<double>& ns,
                          const std::string& method = "bo",
                          double delta = 0.5) {
  ScanTable t;
  t.g_step = gs.size() > 1 ? gs[1] - gs[0] : 0.0;
  t.deltas = {delta};
  for (std::size_t i = 0; i < gs.size(); ++i) {
    ScanRow r;
    r.delta = delta;
    r.g = gs[i];
    r.method = method;
    r.n = ns[i];
    r.energy = -1.0;
    t.rows.push_back(r);
  }
  return t;
}

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (ScanMethod m :
       {ScanMethod::kED, ScanMethod::kBO, ScanMethod::kSH, ScanMethod::kDMRG})
    REQUIRE(scan_method_from_string(to_string(m)) == m);
  REQUIRE_THROWS_AS(scan_method_from_string("mystery"), InvalidParams);
}

TEST_CASE("displaced-ansatz scan tabulates the minimizer on the grid") {
  ModelParams base = mk(10, 1.0, 0.0, 1.0, 40);
  ScanTable t = scan_order_parameter({1.0}, 0.8, 1.2, 0.1, base,
                                     ScanMethod::kBO);
  REQUIRE(t.rows.size() == 5);
  REQUIRE(t.g_step == 0.1);
  REQUIRE(t.n_sites == 10);
  for (const ScanRow& r : t.rows) {
    REQUIRE(r.method == "BO");
    REQUIRE(r.delta == 1.0);
    ModelParams p = base;
    p.delta = r.delta;
    p.g = r.g;
    BOResult b = minimize_bo(p);
    REQUIRE(r.n == b.n);
    REQUIRE(r.energy == b.energy_per_site * base.n_sites);
    REQUIRE(r.flags.empty());
  }
  // same grid, pooled workers: identical table
  ScanOptions opt;
  opt.jobs = 2;
  ScanTable t2 = scan_order_parameter({1.0}, 0.8, 1.2, 0.1, base,
                                      ScanMethod::kBO, opt);
  REQUIRE(t2.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    REQUIRE(t2.rows[i].g == t.rows[i].g);
    REQUIRE(same_double(t2.rows[i].n, t.rows[i].n));
    REQUIRE(same_double(t2.rows[i].energy, t.rows[i].energy));
  }
}

TEST_CASE("eigensolver scan rows match direct solves") {
  ModelParams base = mk(2, 1.0, 0.0, 1.0, 4);
  ScanTable t = scan_order_parameter({0.8}, 0.0, 0.4, 0.2, base,
                                     ScanMethod::kED);
  REQUIRE(t.rows.size() == 3);
  for (const ScanRow& r : t.rows) {
    ModelParams p = base;
    p.delta = r.delta;
    p.g = r.g;
    GroundSpace gs = ground_space(p, 1);
    REQUIRE(r.energy == Catch::Approx(gs.energies[0]).margin(1e-12));
    REQUIRE(r.n >= 0.0);
    REQUIRE(r.flags.empty());
  }
  // occupation grows with coupling
  REQUIRE(t.rows[2].n > t.rows[0].n);
}

TEST_CASE("matrix-product scan agrees with the eigensolver on small chains") {
  ModelParams base = mk(4, 1.0, 0.0, 1.0, 4);
  ScanOptions opt;
  opt.dmrg.max_bond = 16;
  ScanTable t = scan_order_parameter({1.0}, 0.4, 0.6, 0.1, base,
                                     ScanMethod::kDMRG, opt);
  REQUIRE(t.rows.size() == 3);
  for (const ScanRow& r : t.rows) {
    REQUIRE(r.flags.find("error") == std::string::npos);
    ModelParams p = base;
    p.delta = r.delta;
    p.g = r.g;
    GroundSpace gs = ground_space(p, 1);
    REQUIRE(std::abs(r.energy - gs.energies[0]) <= 1e-6);
  }
}

TEST_CASE("scan grid construction validates the ranges") {
  ModelParams base = mk(4, 1.0, 0.0, 1.0, 4);
  REQUIRE_THROWS_AS(
      scan_order_parameter({1.0}, 0.0, 1.0, 0.0, base, ScanMethod::kBO),
      InvalidParams);
  REQUIRE_THROWS_AS(
      scan_order_parameter({1.0}, 1.0, 0.0, 0.1, base, ScanMethod::kBO),
      InvalidParams);
  REQUIRE_THROWS_AS(
      scan_order_parameter({}, 0.0, 1.0, 0.1, base, ScanMethod::kBO),
      InvalidParams);
}

TEST_CASE("derivative is exact for quadratic occupation profiles") {
  std::vector<double> gs, ns;
  for (int i = 0; i <= 5; ++i) {
    const double g = 0.1 * i;
    gs.push_back(g);
    ns.push_back(0.3 * g * g + 0.2 * g + 0.1);
  }
  ScanTable t = numerical_derivative(synthetic_block(gs, ns));
  for (int i = 1; i <= 4; ++i)
    REQUIRE(t.rows[i].dn_dg ==
            Catch::Approx(0.6 * gs[i] + 0.2).margin(1e-12));
  // one-sided ends are exact only for the linear part
  REQUIRE(t.rows[0].dn_dg ==
          Catch::Approx((ns[1] - ns[0]) / 0.1).margin(1e-12));
  REQUIRE(t.rows[5].dn_dg ==
          Catch::Approx((ns[5] - ns[4]) / 0.1).margin(1e-12));
}

TEST_CASE("derivative rejects non-uniform grids") {
  ScanTable bad = synthetic_block({0.0, 0.1, 0.25}, {0.0, 0.1, 0.2});
  REQUIRE_THROWS_AS(numerical_derivative(bad), NonUniformGrid);
  ScanTable rev = synthetic_block({0.2, 0.1, 0.0}, {0.0, 0.1, 0.2});
  REQUIRE_THROWS_AS(numerical_derivative(rev), NonUniformGrid);
}

TEST_CASE("peak extraction refines onto the underlying parabola") {
  // derivative samples taken from d(g) = 5 - 40 (g - 0.47)^2
  std::vector<double> gs = {0.40, 0.45, 0.50, 0.55, 0.60};
  ScanTable t = synthetic_block(gs, std::vector<double>(gs.size(), 0.0));
  for (std::size_t i = 0; i < gs.size(); ++i)
    t.rows[i].dn_dg = 5.0 - 40.0 * (gs[i] - 0.47) * (gs[i] - 0.47);
  auto pk = derivative_peak(t, "bo", 0.5);
  REQUIRE(pk.has_value());
  REQUIRE(pk->g_peak == Catch::Approx(0.47).margin(1e-12));
  REQUIRE(pk->height == Catch::Approx(5.0).margin(1e-12));
  // method match is case-insensitive (tables store the canonical upper case)
  auto pk_uc = derivative_peak(t, "BO", 0.5);
  REQUIRE(pk_uc.has_value());
  REQUIRE(pk_uc->g_peak == pk->g_peak);
}

TEST_CASE("peak extraction skips flagged rows and empty selections") {
  std::vector<double> gs = {0.1, 0.2, 0.3, 0.4};
  ScanTable t = synthetic_block(gs, std::vector<double>(gs.size(), 0.0));
  t.rows[0].dn_dg = 1.0;
  t.rows[1].dn_dg = 9.0; // would win, but flagged
  t.rows[2].dn_dg = 3.0;
  t.rows[3].dn_dg = 1.0;
  t.rows[1].flags = "cutoff";
  auto pk = derivative_peak(t, "bo", 0.5);
  REQUIRE(pk.has_value());
  REQUIRE(pk->g_peak == Catch::Approx(0.3)); // refinement blocked by the flag
  REQUIRE(pk->height == Catch::Approx(3.0));
  // wrong method or delta: nothing to select
  REQUIRE(!derivative_peak(t, "sh", 0.5).has_value());
  REQUIRE(!derivative_peak(t, "bo", 0.9).has_value());
  // all rows unusable
  for (auto& r : t.rows) r.flags = "error:NoConvergence";
  REQUIRE(!derivative_peak(t, "bo", 0.5).has_value());
}

TEST_CASE("correlation fit recovers a pure exponential decay") {
  std::vector<std::pair<double, double>> profile;
  for (int sep = 0; sep <= 8; ++sep)
    profile.push_back({double(sep), 2.0 * std::exp(-sep / 3.0)});
  FitResult f = correlation_decay_fit(profile); // sep 0 excluded by the fit
  REQUIRE(f.slope == Catch::Approx(-1.0 / 3.0).margin(1e-12));
  REQUIRE(f.intercept == Catch::Approx(std::log(2.0)).margin(1e-12));
  REQUIRE(f.r_squared >= 1.0 - 1e-12);
  REQUIRE(f.point_count == 8);
  REQUIRE(correlation_length(profile) == Catch::Approx(3.0).margin(1e-9));
}

TEST_CASE("correlation fit refuses unusable profiles") {
  std::vector<std::pair<double, double>> shorty = {
      {1.0, 0.5}, {2.0, 0.3}, {3.0, 0.2}};
  REQUIRE_THROWS_AS(correlation_decay_fit(shorty), InsufficientDecay);
  std::vector<std::pair<double, double>> tiny;
  for (int sep = 1; sep <= 8; ++sep) tiny.push_back({double(sep), 1e-14});
  REQUIRE_THROWS_AS(correlation_decay_fit(tiny), InsufficientDecay);
  std::vector<std::pair<double, double>> growing;
  for (int sep = 1; sep <= 8; ++sep)
    growing.push_back({double(sep), std::exp(0.2 * sep)});
  REQUIRE_THROWS_AS(correlation_length(growing), InsufficientDecay);
}

TEST_CASE("critical-line fit recovers a power law on the log-log axes") {
  std::vector<std::pair<double, double>> peaks;
  for (double d : {0.3, 0.5, 0.7, 0.9})
    peaks.push_back({d, 1.1 * std::pow(d, 0.66)});
  FitResult f = fit_critical_line(peaks);
  REQUIRE(f.slope == Catch::Approx(0.66).margin(1e-12));
  REQUIRE(f.intercept == Catch::Approx(std::log(1.1)).margin(1e-12));
  REQUIRE(f.r_squared >= 1.0 - 1e-12);
  REQUIRE_THROWS_AS(
      fit_critical_line({{0.3, 0.5}, {0.5, 0.7}}), InsufficientPoints);
  REQUIRE_THROWS_AS(
      fit_critical_line({{0.3, 0.5}, {0.5, 0.7}, {1.2, 1.0}}), InvalidParams);
  REQUIRE_THROWS_AS(
      fit_critical_line({{0.3, 0.5}, {0.5, -0.7}, {0.7, 1.0}}), InvalidParams);
}

TEST_CASE("inverse correlation-length fit is linear in the detuning") {
  std::vector<std::pair<double, double>> pts;
  for (double d : {0.3, 0.5, 0.7, 0.9})
    pts.push_back({d, 1.0 / (0.8 * d + 0.05)});
  FitResult f = fit_chi_scaling(pts);
  REQUIRE(f.slope == Catch::Approx(0.8).margin(1e-12));
  REQUIRE(f.intercept == Catch::Approx(0.05).margin(1e-12));
  REQUIRE(f.r_squared >= 1.0 - 1e-12);
  REQUIRE_THROWS_AS(fit_chi_scaling({{0.3, 1.0}, {0.5, 2.0}}),
                    InsufficientPoints);
  REQUIRE_THROWS_AS(fit_chi_scaling({{0.3, 1.0}, {0.5, 2.0}, {0.7, 0.0}}),
                    InvalidParams);
}

TEST_CASE("scan tables survive a CSV round trip") {
  ScanTable t;
  t.g_step = 0.02;
  t.deltas = {0.3, 0.9};
  t.n_sites = 50;
  t.n_fock = 10;
  t.max_bond = 10;
  ScanRow a;
  a.delta = 0.3;
  a.g = 1.0 / 3.0;
  a.method = "dmrg";
  a.energy = -49.123456789012345;
  a.n = 0.123456789;
  a.dn_dg = std::numeric_limits<double>::quiet_NaN();
  a.chi = 4.56;
  a.flags = "cutoff;hysteresis";
  ScanRow b = a;
  b.delta = 0.9;
  b.chi = std::numeric_limits<double>::quiet_NaN();
  b.flags.clear();
  t.rows = {a, b};
  std::ostringstream os;
  to_csv(t, os);
  const std::string text = os.str();
  REQUIRE(text.substr(0, 1) == "#");
  REQUIRE(text.find("delta,g,method,energy,n,dn_dg,chi,flags\n") !=
          std::string::npos);
  std::istringstream is(text);
  ScanTable back = from_csv(is);
  REQUIRE(back.g_step == t.g_step);
  REQUIRE(back.deltas == t.deltas);
  REQUIRE(back.n_sites == 50);
  REQUIRE(back.n_fock == 10);
  REQUIRE(back.max_bond == 10);
  REQUIRE(back.rows.size() == 2);
  for (int i = 0; i < 2; ++i) {
    REQUIRE(back.rows[i].delta == t.rows[i].delta);
    REQUIRE(back.rows[i].g == t.rows[i].g); // 17 digits: bit-exact
    REQUIRE(back.rows[i].method == t.rows[i].method);
    REQUIRE(same_double(back.rows[i].energy, t.rows[i].energy));
    REQUIRE(same_double(back.rows[i].n, t.rows[i].n));
    REQUIRE(same_double(back.rows[i].dn_dg, t.rows[i].dn_dg));
    REQUIRE(same_double(back.rows[i].chi, t.rows[i].chi));
    REQUIRE(back.rows[i].flags == t.rows[i].flags);
  }
}

TEST_CASE("CSV reader rejects malformed input") {
  std::istringstream bad_header("delta,g,method\n0.3,0.5,bo\n");
  REQUIRE_THROWS_AS(from_csv(bad_header), ConfigParseError);
  std::istringstream no_header("");
  REQUIRE_THROWS_AS(from_csv(no_header), ConfigParseError);
  std::istringstream short_row(
      "delta,g,method,energy,n,dn_dg,chi,flags\n0.3,0.5,bo\n");
  REQUIRE_THROWS_AS(from_csv(short_row), ConfigParseError);
}
