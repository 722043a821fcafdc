#pragma once

#include <functional>
#include <vector>

#include "andersonspec/blockmodel.hpp"
#include "andersonspec/types.hpp"

namespace andersonspec {

/// 2m x 2m propagator of end components for the eigenproblem at energy eps.
struct TransferOperator {
  Matrix matrix;
  cplx energy{0.0, 0.0};
  int m = 0;
  int n = 0;
};

/// Corner-built pairing under which the transfer matrix is symplectic:
/// Sigma = [[0, -B_n^dag], [B_n, 0]].
struct SymplecticForm {
  Matrix matrix;
  Matrix inverse;
};

enum class ExponentKind { TExponents, QExponents, LyapunovOracle };

/// Sorted per-unit decay exponents. For T the values are (1/n) log|lambda_a|;
/// for Q they are (1/(2n)) log of the eigenvalue moduli, so both scales are
/// directly comparable across chain lengths.
struct ExponentSpectrum {
  std::vector<double> values;  // ascending
  ExponentKind kind = ExponentKind::TExponents;
  cplx energy{0.0, 0.0};
  std::vector<double> std_errors;  // filled by the oracle, empty otherwise

  /// Mean of the strictly positive values (1/m normalization uses the count
  /// of positive entries for paired spectra, i.e. values.size()/2).
  double mean_positive() const;
};

/// One factor of the transfer product: [[B^{-1}(eps - A), -B^{-1} B_prev^dag], [I, 0]].
Matrix single_factor(const Matrix& a, const Matrix& b, const Matrix& b_prev, cplx eps);

/// Ordered product of the n factors, rightmost k = 1 (the factor of unit 1
/// couples back to the corner bond B_n). Refuses with OverflowRisk when
/// n * max_k log||factor_k|| >= 600, since the raw product would overflow;
/// large chains belong to the Jensen-average route.
TransferOperator build_transfer(const BlockModel& model, cplx eps);

SymplecticForm symplectic_form(const BlockModel& model);

/// Max-norm residuals of T(eps*)^dag Sigma T(eps) - Sigma and
/// T(eps) Sigma^{-1} T(eps*)^dag - Sigma^{-1}; the conjugate-energy operator
/// is built internally.
std::pair<double, double> symplectic_residuals(const BlockModel& model, cplx eps);

/// Eigenvalues lambda_a of T are z_a^n; returns xi_a = (1/n) log|lambda_a|,
/// ascending. Throws ZeroEigenvalue below the modulus floor.
ExponentSpectrum exponents_direct(const TransferOperator& transfer);

/// Q(eps) = T(eps*)^dag T(eps), built from the factored form
/// u_1 sigma_1^dag ... u_n (...) t_n sigma_{n-1} ... t_1 when bonds are
/// nontrivial, as a plain product otherwise. Requires a unitary corner bond.
TransferOperator build_q(const BlockModel& model, cplx eps);

struct OracleOptions {
  long total_length = 100000;  // accumulated factors (after warmup)
  int reorth_period = 8;       // factors between QR re-orthogonalizations
  int warmup_chunks = 32;      // discarded leading chunks (direction transient)
  double budget = 1e9;         // cap on total_length * reorth_period
  double condition_cap = 1e12; // early re-orthogonalization trigger
};

/// Standard QR-reorthogonalized Lyapunov spectrum for a stream of Anderson
/// factors [[eps - A_j, -I], [I, 0]]. `blocks(j)` must return the j-th
/// transverse block (0-based) of size m. Returns 2m per-unit exponents,
/// ascending, with standard errors estimated across chunks.
ExponentSpectrum lyapunov_oracle(const std::function<Matrix(long)>& blocks, int m, double eps,
                                 const OracleOptions& options = {});

/// Spectral data of one decoupled transverse channel at zero disorder:
/// lambdas are the eigenvalues of the constant block A, and each channel
/// contributes the root pair of z^2 - (eps - lambda) z + 1 = 0.
struct ZeroDisorderClosedForm {
  std::vector<double> lambdas;
  double energy = 0.0;

  /// Root with |z| >= 1 for channel k.
  cplx root(int k) const;
};

/// Closed-form Q exponents for the zero-disorder chain of length n: the
/// eigenvalues of Q are pairs w_k^{+-1} with
///   w_k + 1/w_k = (z^{2n} + z^{-2n}) ((z^2+1)/(z^2-1))^2 - 8 z^2/(z^2-1)^2,
/// and the returned values are +-(1/(2n)) log|w_k|, ascending. Channels at a
/// band edge (|z_k^2 - 1| < 1e-8) are rejected with BandEdge.
ExponentSpectrum zero_disorder_q_exponents(const ZeroDisorderClosedForm& cf, int n);

}  // namespace andersonspec
