#pragma once
// Error taxonomy shared by every module.  All failures surface as typed
// exceptions deriving from irlat::Error so callers (CLI, tests) can map them
// to exit codes without string matching.

#include <stdexcept>
#include <string>

namespace irlat {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Model / parameter validation.
struct InvalidParams : Error {
  using Error::Error;
};
// Requested Hilbert space exceeds the hard dimension guard.
struct DimensionOverflow : Error {
  using Error::Error;
};
// Site or ion index outside the chain.
struct IndexOutOfRange : Error {
  using Error::Error;
};
// Operands act on different Hilbert spaces.
struct DimensionMismatch : Error {
  using Error::Error;
};
// An expression's denominator vanishes in a regime the formula excludes.
struct DivisionByZero : Error {
  using Error::Error;
};
// Hopping requested between an ion and itself.
struct SameIonIndex : Error {
  using Error::Error;
};
// Iterative eigensolver failed to reach its residual target.
struct NoConvergence : Error {
  using Error::Error;
};
// Ground-pair symmetry restriction is inconsistent (non-commuting gauge
// restrictions); degenerate subspace cannot be resolved deterministically.
struct DegeneracyResolutionFailure : Error {
  using Error::Error;
};
// Converged state populates the oscillator cutoff beyond the sanity rule
// 2*n_mean <= n_fock; results would be truncation-limited.
struct CutoffViolation : Error {
  using Error::Error;
};
// Scan grid is not uniform where a uniform grid is required.
struct NonUniformGrid : Error {
  using Error::Error;
};
// Too few usable points for a requested fit.
struct InsufficientPoints : Error {
  using Error::Error;
};
// Correlation profile has fewer than the minimum usable decay points.
struct InsufficientDecay : Error {
  using Error::Error;
};
// Config file is malformed, has the wrong schema version, or names an
// unknown key.
struct ConfigParseError : Error {
  using Error::Error;
};
// A run preset was requested without the explicit long-run opt-in.
struct BudgetRefused : Error {
  using Error::Error;
};

}  // namespace irlat
