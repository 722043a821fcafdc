#pragma once

#include <span>
#include <vector>

#include "andersonspec/types.hpp"

namespace andersonspec {

/// Chain of n units with m internal states: Hermitian diagonal blocks A_k and
/// invertible bonds B_k, closed into a ring through the corner bond B_n.
/// Immutable after construction; all operations on it are pure.
class BlockModel {
 public:
  /// Validates and takes ownership of the blocks. Requires n >= 3 (so corner
  /// and band blocks never overlap), every A_k Hermitian to 1e-12 relative,
  /// and |det B_k| above the pivot floor.
  BlockModel(std::vector<Matrix> a, std::vector<Matrix> b);

  int units() const { return n_; }
  int block_size() const { return m_; }
  int dim() const { return n_ * m_; }

  /// Zero-based access: a(k) is the block of unit k+1.
  const Matrix& a(int k) const { return a_[static_cast<std::size_t>(k)]; }
  const Matrix& b(int k) const { return b_[static_cast<std::size_t>(k)]; }

  /// Whether the corner bond B_n is unitary (within 1e-10); some doubled
  /// constructions require this.
  bool corner_unitary() const { return corner_unitary_; }

  /// True when every bond equals the identity (Anderson-type models).
  bool identity_bonds() const { return identity_bonds_; }

  /// sum_k log|det B_k|
  double log_abs_det_b_total() const { return log_abs_det_b_total_; }
  /// sum_{k<n} log|det B_k| (corner bond excluded)
  double log_abs_det_b_partial() const { return log_abs_det_b_partial_; }
  /// log of the complex product det(B_1) ... det(B_n)
  cplx log_det_b_product() const { return log_det_b_product_; }

  /// Row-sum bound on ||H|| at xi = 0; used for default probe ranges.
  double norm_bound() const { return norm_bound_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<Matrix> a_;
  std::vector<Matrix> b_;
  bool corner_unitary_ = false;
  bool identity_bonds_ = false;
  double log_abs_det_b_total_ = 0.0;
  double log_abs_det_b_partial_ = 0.0;
  cplx log_det_b_product_{0.0, 0.0};
  double norm_bound_ = 0.0;
};

/// Boundary twist (xi, phi): the eigenvector picks up the corner multiplier
/// s = exp(n xi + i phi) across the ring seam. phi is the corner phase; the
/// per-bond factor is z = exp(xi + i phi / n), so z^n = s. The canonical range
/// of phi is [0, 2pi) but any real value is accepted: phi and phi + 2pi give
/// different balanced matrices with identical spectra, which is a property
/// worth probing.
struct BoundaryFactor {
  double xi = 0.0;
  double phi = 0.0;

  cplx corner_multiplier(int n) const;  // s = e^{n xi + i phi}
  cplx bond_factor(int n) const;        // z = e^{xi + i phi / n}
};

enum class SpectrumSource { Plain, Balanced };

struct DenseSpectrum {
  std::vector<cplx> eigenvalues;  // nm values, unordered
  SpectrumSource source = SpectrumSource::Plain;
};

/// Dense realization with the corner factor concentrated on the seam:
/// bands A_k, B_k, B_k^dag; corner (1,n) = B_n^dag / s, corner (n,1) = s B_n.
/// Entries grow like e^{n|xi|}; prefer the balanced form for determinants.
Matrix realize_h(const BlockModel& model, const BoundaryFactor& bf);

/// Similarity transform of realize_h spreading the twist evenly: every
/// forward bond carries z, every backward bond 1/z, so entries stay
/// O(e^{|xi|}). Same characteristic polynomial as realize_h.
Matrix realize_h_balanced(const BlockModel& model, const BoundaryFactor& bf);

/// (1/(nm)) log |det[eps I - H_b(z)]| by LU with partial pivoting on the
/// balanced realization, accumulating log pivot magnitudes. Throws
/// SingularShift when a pivot falls below 1e-300.
double log_abs_det_shifted(const BlockModel& model, const BoundaryFactor& bf, cplx eps);

/// Full complex log-determinant of [eps I - H_b(z)]: real part log|det|,
/// imaginary part the accumulated argument (mod 2pi). Used where the phase
/// matters (duality residuals).
cplx shifted_log_det(const BlockModel& model, const BoundaryFactor& bf, cplx eps);

/// log-determinant of an arbitrary dense complex matrix by the same route.
cplx log_det(const Matrix& matrix);

/// All eigenvalues of a dense complex matrix. Throws NoConvergence with the
/// matrix dimension when the QR iteration budget is exhausted.
DenseSpectrum dense_eigenvalues(const Matrix& matrix, SpectrumSource source = SpectrumSource::Plain);

/// Greedy matching distance between two eigenvalue multisets: repeatedly
/// pairs the globally closest remaining points and returns the largest
/// matched distance (infinity when sizes differ).
double spectral_multiset_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace andersonspec
