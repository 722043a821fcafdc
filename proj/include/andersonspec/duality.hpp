#pragma once

#include "andersonspec/blockmodel.hpp"
#include "andersonspec/types.hpp"

namespace andersonspec {

/// Both sides of the determinant duality at (eps, s), scaled by a common
/// factor exp(log_scale) so huge determinants stay representable:
///   lhs = det[eps I - H(s)] / det[B_1 ... B_n] * e^{-log_scale}
///   rhs = (-1)^m s^{-m} det[T(eps) - s I]      * e^{-log_scale}
struct DualitySides {
  cplx lhs;
  cplx rhs;
  double log_scale;
};

DualitySides duality_sides(const BlockModel& model, cplx eps, cplx s);

/// |lhs - rhs| / max(|lhs|, |rhs|, 1e-30) with the common scale removed.
double duality_residual(const BlockModel& model, cplx eps, cplx s);

/// Doubled chain of 2n blocks whose transfer matrix reproduces Q(eps) and
/// whose shifted form K makes the energy a plain spectral parameter. Both
/// constructions require a unitary corner bond.
struct DoubledModel {
  BlockModel base;

  int size() const { return 2 * base.dim(); }

  /// Upper chain A_k - eps with bonds B_k, lower chain eps - A_k reversed
  /// with conjugated bonds, identity couplings at the fold, corner factors
  /// s^{-1} (upper right) and s (lower left).
  Matrix m(cplx eps, cplx s) const;

  /// Energy-independent doubled operator: both chains carry +A, the fold is
  /// -I / +I, and the corners are t^{-1} (upper right) and -t (lower left).
  /// Satisfies det[K(t) - eps I] / prod|det B_k|^2
  ///         = (-1)^m t^{-m} det[Q(eps) - t I].
  Matrix k(cplx t) const;
};

Matrix build_m(const BlockModel& model, cplx eps, cplx s);
Matrix build_k(const BlockModel& model, cplx t);

/// Transfer matrix theta(eps) of the doubled chain (corners excluded from
/// the bands, corner bond = identity); Q(eps) = (-1)^n diag(I, B_n) theta
/// diag(I, B_n^dag).
Matrix transfer_of_m(const BlockModel& model, cplx eps);

/// log det[K(e^{2 n xi + i phi}) - eps I] via LU on the per-chain balanced
/// similarity transform of K (bond factors w = e^{xi + i phi/(2n)}), so the
/// entries stay O(e^{|xi|}).
cplx log_det_k_shifted(const BlockModel& model, double xi, double phi, cplx eps);

/// The conjugation witnesses of the doubled operator: J carries 2n identity
/// blocks along the anti-diagonal, S3 = diag(I_nm, -I_nm); both square to the
/// identity.
struct SymmetryWitness {
  Matrix j;
  Matrix s3;
};

SymmetryWitness symmetry_witness(const BlockModel& model);

/// Structural conjugations of K: J (anti-diagonal block flip) maps K(t) to
/// K(t*)^dag, S3 = diag(I, -I) maps K(t) to K(1/t*)^dag; together they give
/// K(t) ~ K(1/t). Residuals are entrywise max-norm; the third entry is the
/// eigenvalue multiset distance between K(t) and K(1/t).
struct SymmetryResiduals {
  double j_residual;
  double s3_residual;
  double spectral_distance;
};

SymmetryResiduals symmetry_residuals(const DoubledModel& doubled, cplx t);

}  // namespace andersonspec
