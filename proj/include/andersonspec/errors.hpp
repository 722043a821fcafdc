#pragma once

#include <stdexcept>
#include <string>

namespace andersonspec {

/// Base class for every failure the library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A shifted determinant hit a pivot below the floor: the probe energy is
/// numerically an eigenvalue of the realized matrix.
struct SingularShift : Error {
  using Error::Error;
};

/// Raw transfer-matrix product would leave the double range.
struct OverflowRisk : Error {
  using Error::Error;
};

/// Operation requires the corner bond B_n to be unitary.
struct NotUnitaryCorner : Error {
  using Error::Error;
};

/// Transfer matrix has an eigenvalue with modulus below the floor.
struct ZeroEigenvalue : Error {
  using Error::Error;
};

/// Dense eigensolver exhausted its iteration budget.
struct NoConvergence : Error {
  using Error::Error;
};

/// Lyapunov oracle run exceeds the configured work budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

/// Angular quadrature failed to converge at the cap; the probe radius is
/// almost certainly within ~1e-6 of an exponent.
struct QuadratureStall : Error {
  QuadratureStall(const std::string& msg, double xi) : Error(msg), suspected_breakpoint(xi) {}
  double suspected_breakpoint;
};

/// Real probe energy collides with an eigenvalue on the Bloch circle even
/// after the half-step grid shift.
struct RealAxisSingularity : Error {
  using Error::Error;
};

/// Counting curve has nonzero slope already at xi -> 0+: the smallest
/// exponent is below the grid resolution.
struct NoPlateau : Error {
  using Error::Error;
};

/// Two breakpoints closer than the resolvable separation.
struct UnresolvedCluster : Error {
  using Error::Error;
};

/// Closed-form channel sits at a band edge (|z_k^2 - 1| ~ 0).
struct BandEdge : Error {
  using Error::Error;
};

struct EmptyHistogram : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

/// Configuration file or flag rejected.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace andersonspec
