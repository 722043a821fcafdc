#include "andersonspec/blockmodel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "andersonspec/errors.hpp"

namespace andersonspec {

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// log of det via partial-pivoted LU: Re = sum log|pivot|, Im = accumulated
/// argument. Throws SingularShift below the pivot floor.
cplx lu_log_det(const Matrix& matrix, const char* what) {
  Eigen::PartialPivLU<Matrix> lu(matrix);
  cplx log_det{0.0, 0.0};
  const auto& diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const cplx pivot = diag(i);
    const double mag = std::abs(pivot);
    if (!(mag >= kPivotFloor)) {
      std::ostringstream msg;
      msg << what << ": pivot " << i << " has magnitude " << mag << " (below 1e-300); the shift is numerically an eigenvalue";
      throw SingularShift(msg.str());
    }
    log_det += std::log(pivot);
  }
  if (lu.permutationP().determinant() < 0) log_det += cplx(0.0, std::numbers::pi);
  return log_det;
}

}  // namespace

BlockModel::BlockModel(std::vector<Matrix> a, std::vector<Matrix> b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) throw Error("BlockModel: A and B lists must have the same length");
  n_ = static_cast<int>(a_.size());
  if (n_ < 3) throw Error("BlockModel: need at least 3 units so corner and band blocks do not overlap");
  m_ = static_cast<int>(a_.front().rows());
  if (m_ < 1) throw Error("BlockModel: block size must be >= 1");

  identity_bonds_ = true;
  double band_norm = 0.0;
  for (int k = 0; k < n_; ++k) {
    const Matrix& ak = a_[static_cast<std::size_t>(k)];
    const Matrix& bk = b_[static_cast<std::size_t>(k)];
    if (ak.rows() != m_ || ak.cols() != m_ || bk.rows() != m_ || bk.cols() != m_)
      throw Error("BlockModel: all blocks must be m x m");
    const double scale = std::max(1.0, max_abs(ak));
    if (max_abs(ak - ak.adjoint()) > 1e-12 * scale)
      throw Error("BlockModel: A_" + std::to_string(k + 1) + " is not Hermitian within 1e-12 relative");
    cplx ld;
    try {
      ld = lu_log_det(bk, "BlockModel bond");
    } catch (const SingularShift&) {
      throw Error("BlockModel: B_" + std::to_string(k + 1) + " is numerically singular");
    }
    log_abs_det_b_total_ += ld.real();
    if (k < n_ - 1) log_abs_det_b_partial_ += ld.real();
    log_det_b_product_ += ld;
    if (!bk.isIdentity(0.0)) identity_bonds_ = false;
    band_norm = std::max(band_norm, ak.cwiseAbs().rowwise().sum().maxCoeff() + 2.0 * bk.cwiseAbs().rowwise().sum().maxCoeff());
  }
  norm_bound_ = band_norm;

  const Matrix& bn = b_.back();
  corner_unitary_ = max_abs(bn * bn.adjoint() - Matrix::Identity(m_, m_)) < 1e-10;
}

cplx BoundaryFactor::corner_multiplier(int n) const { return std::exp(cplx(n * xi, phi)); }

cplx BoundaryFactor::bond_factor(int n) const { return std::exp(cplx(xi, phi / n)); }

Matrix realize_h(const BlockModel& model, const BoundaryFactor& bf) {
  const int n = model.units(), m = model.block_size();
  Matrix h = Matrix::Zero(n * m, n * m);
  for (int k = 0; k < n; ++k) h.block(k * m, k * m, m, m) = model.a(k);
  for (int k = 0; k + 1 < n; ++k) {
    h.block(k * m, (k + 1) * m, m, m) = model.b(k);
    h.block((k + 1) * m, k * m, m, m) = model.b(k).adjoint();
  }
  const cplx s = bf.corner_multiplier(n);
  h.block(0, (n - 1) * m, m, m) = model.b(n - 1).adjoint() / s;
  h.block((n - 1) * m, 0, m, m) = s * model.b(n - 1);
  return h;
}

Matrix realize_h_balanced(const BlockModel& model, const BoundaryFactor& bf) {
  const int n = model.units(), m = model.block_size();
  Matrix h = Matrix::Zero(n * m, n * m);
  const cplx z = bf.bond_factor(n);
  const cplx zinv = 1.0 / z;
  for (int k = 0; k < n; ++k) h.block(k * m, k * m, m, m) = model.a(k);
  for (int k = 0; k + 1 < n; ++k) {
    h.block(k * m, (k + 1) * m, m, m) = z * model.b(k);
    h.block((k + 1) * m, k * m, m, m) = zinv * model.b(k).adjoint();
  }
  h.block(0, (n - 1) * m, m, m) = zinv * model.b(n - 1).adjoint();
  h.block((n - 1) * m, 0, m, m) = z * model.b(n - 1);
  return h;
}

double log_abs_det_shifted(const BlockModel& model, const BoundaryFactor& bf, cplx eps) {
  return shifted_log_det(model, bf, eps).real() / model.dim();
}

cplx shifted_log_det(const BlockModel& model, const BoundaryFactor& bf, cplx eps) {
  Matrix shifted = -realize_h_balanced(model, bf);
  shifted.diagonal().array() += eps;
  return lu_log_det(shifted, "shifted determinant");
}

cplx log_det(const Matrix& matrix) { return lu_log_det(matrix, "determinant"); }

DenseSpectrum dense_eigenvalues(const Matrix& matrix, SpectrumSource source) {
  if (!matrix.allFinite()) throw Error("dense_eigenvalues: matrix has non-finite entries");
  Eigen::ComplexEigenSolver<Matrix> solver(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "dense_eigenvalues: QR iteration did not converge for a " << matrix.rows() << " x " << matrix.cols()
        << " matrix within the budget of " << 30 * matrix.rows() << " iterations";
    throw NoConvergence(msg.str());
  }
  DenseSpectrum spectrum;
  spectrum.source = source;
  spectrum.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  return spectrum;
}

double spectral_multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace andersonspec
