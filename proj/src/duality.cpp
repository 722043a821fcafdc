#include "andersonspec/duality.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "andersonspec/errors.hpp"
#include "andersonspec/transfer.hpp"

namespace andersonspec {

namespace {

void require_unitary_corner(const BlockModel& model, const char* what) {
  if (!model.corner_unitary()) throw NotUnitaryCorner(std::string(what) + ": corner bond B_n must be unitary");
}

/// Doubled-chain band structure shared by M and K: diagonal blocks D_j and
/// forward bonds F_j for j = 1..2n (F_2n is the corner bond).
struct DoubledBands {
  std::vector<Matrix> diag;
  std::vector<Matrix> bond;
};

DoubledBands doubled_bands(const BlockModel& model, cplx eps, bool shifted_form) {
  const int n = model.units(), m = model.block_size();
  const Matrix id = Matrix::Identity(m, m);
  DoubledBands bands;
  bands.diag.reserve(static_cast<std::size_t>(2 * n));
  bands.bond.reserve(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    bands.diag.push_back(shifted_form ? model.a(j) : Matrix(model.a(j) - eps * id));
    bands.bond.push_back(j < n - 1 ? model.b(j) : id);  // fold coupling at j = n
  }
  for (int j = 0; j < n; ++j) {
    const Matrix& a = model.a(n - 1 - j);
    bands.diag.push_back(shifted_form ? Matrix(a) : Matrix(eps * id - a));
    bands.bond.push_back(j < n - 1 ? Matrix(model.b(n - 2 - j).adjoint()) : id);  // corner bond at j = 2n
  }
  return bands;
}

}  // namespace

DualitySides duality_sides(const BlockModel& model, cplx eps, cplx s) {
  const int m = model.block_size();
  const BoundaryFactor bf{std::log(std::abs(s)) / model.units(), std::arg(s)};
  const cplx log_lhs = shifted_log_det(model, bf, eps) - model.log_det_b_product();

  const TransferOperator transfer = build_transfer(model, eps);
  Matrix shifted = transfer.matrix;
  shifted.diagonal().array() -= s;
  cplx log_rhs = log_det(shifted) - static_cast<double>(m) * std::log(s);
  if (m % 2 != 0) log_rhs += cplx(0.0, std::numbers::pi);

  const double scale = std::max(log_lhs.real(), log_rhs.real());
  return DualitySides{std::exp(log_lhs - scale), std::exp(log_rhs - scale), scale};
}

double duality_residual(const BlockModel& model, cplx eps, cplx s) {
  const DualitySides sides = duality_sides(model, eps, s);
  const double floor = 1e-30 * std::exp(-sides.log_scale);
  return std::abs(sides.lhs - sides.rhs) / std::max({std::abs(sides.lhs), std::abs(sides.rhs), floor});
}

Matrix DoubledModel::m(cplx eps, cplx s) const { return build_m(base, eps, s); }

Matrix DoubledModel::k(cplx t) const { return build_k(base, t); }

Matrix build_m(const BlockModel& model, cplx eps, cplx s) {
  require_unitary_corner(model, "build_m");
  const int n = model.units(), mm = model.block_size();
  const int blocks = 2 * n;
  const DoubledBands bands = doubled_bands(model, eps, /*shifted_form=*/false);
  Matrix out = Matrix::Zero(blocks * mm, blocks * mm);
  for (int j = 0; j < blocks; ++j) out.block(j * mm, j * mm, mm, mm) = bands.diag[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < blocks; ++j) {
    out.block(j * mm, (j + 1) * mm, mm, mm) = bands.bond[static_cast<std::size_t>(j)];
    out.block((j + 1) * mm, j * mm, mm, mm) = bands.bond[static_cast<std::size_t>(j)].adjoint();
  }
  out.block(0, (blocks - 1) * mm, mm, mm) = Matrix::Identity(mm, mm) / s;
  out.block((blocks - 1) * mm, 0, mm, mm) = s * Matrix::Identity(mm, mm);
  return out;
}

Matrix build_k(const BlockModel& model, cplx t) {
  require_unitary_corner(model, "build_k");
  const int n = model.units(), mm = model.block_size();
  const int blocks = 2 * n;
  const DoubledBands bands = doubled_bands(model, cplx(0.0, 0.0), /*shifted_form=*/true);
  Matrix out = Matrix::Zero(blocks * mm, blocks * mm);
  for (int j = 0; j < blocks; ++j) out.block(j * mm, j * mm, mm, mm) = bands.diag[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < blocks; ++j) {
    out.block(j * mm, (j + 1) * mm, mm, mm) = bands.bond[static_cast<std::size_t>(j)];
    out.block((j + 1) * mm, j * mm, mm, mm) = bands.bond[static_cast<std::size_t>(j)].adjoint();
  }
  // Sign pattern of the shifted form: the fold couplings become -I / +I and
  // the corners t^{-1} / -t.
  out.block((n - 1) * mm, n * mm, mm, mm) = -Matrix::Identity(mm, mm);
  out.block(n * mm, (n - 1) * mm, mm, mm) = Matrix::Identity(mm, mm);
  out.block(0, (blocks - 1) * mm, mm, mm) = Matrix::Identity(mm, mm) / t;
  out.block((blocks - 1) * mm, 0, mm, mm) = -t * Matrix::Identity(mm, mm);
  return out;
}

Matrix transfer_of_m(const BlockModel& model, cplx eps) {
  require_unitary_corner(model, "transfer_of_m");
  const int n = model.units(), mm = model.block_size();
  const int blocks = 2 * n;
  const DoubledBands bands = doubled_bands(model, eps, /*shifted_form=*/false);
  // Transfer factors of the doubled chain at energy zero; the factor of unit
  // j couples back through bond j-1 (bond 2n for the first unit).
  Matrix product = Matrix::Identity(2 * mm, 2 * mm);
  for (int j = 0; j < blocks; ++j) {
    const Matrix& bond_prev = bands.bond[static_cast<std::size_t>((j + blocks - 1) % blocks)];
    product = single_factor(bands.diag[static_cast<std::size_t>(j)], bands.bond[static_cast<std::size_t>(j)], bond_prev,
                            cplx(0.0, 0.0)) *
              product;
  }
  return product;
}

cplx log_det_k_shifted(const BlockModel& model, double xi, double phi, cplx eps) {
  require_unitary_corner(model, "log_det_k_shifted");
  const int n = model.units(), mm = model.block_size();
  const int blocks = 2 * n;
  const cplx w = std::exp(cplx(xi, phi / blocks));
  const cplx winv = 1.0 / w;
  const DoubledBands bands = doubled_bands(model, cplx(0.0, 0.0), /*shifted_form=*/true);
  Matrix out = Matrix::Zero(blocks * mm, blocks * mm);
  for (int j = 0; j < blocks; ++j) out.block(j * mm, j * mm, mm, mm) = -bands.diag[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < blocks; ++j) {
    out.block(j * mm, (j + 1) * mm, mm, mm) = -w * bands.bond[static_cast<std::size_t>(j)];
    out.block((j + 1) * mm, j * mm, mm, mm) = -winv * bands.bond[static_cast<std::size_t>(j)].adjoint();
  }
  out.block((n - 1) * mm, n * mm, mm, mm) = w * Matrix::Identity(mm, mm);
  out.block(n * mm, (n - 1) * mm, mm, mm) = -winv * Matrix::Identity(mm, mm);
  out.block(0, (blocks - 1) * mm, mm, mm) = -winv * Matrix::Identity(mm, mm);
  out.block((blocks - 1) * mm, 0, mm, mm) = w * Matrix::Identity(mm, mm);
  out.diagonal().array() += eps;
  // out = eps I - K_balanced; det[K - eps I] = (-1)^{2nm} det(out) = det(out).
  return log_det(out);
}

SymmetryWitness symmetry_witness(const BlockModel& model) {
  const int n = model.units(), mm = model.block_size();
  const int size = 2 * n * mm;
  SymmetryWitness witness{Matrix::Zero(size, size), Matrix::Zero(size, size)};
  for (int b = 0; b < 2 * n; ++b)
    witness.j.block(b * mm, (2 * n - 1 - b) * mm, mm, mm) = Matrix::Identity(mm, mm);
  witness.s3.topLeftCorner(n * mm, n * mm) = Matrix::Identity(n * mm, n * mm);
  witness.s3.bottomRightCorner(n * mm, n * mm) = -Matrix::Identity(n * mm, n * mm);
  return witness;
}

SymmetryResiduals symmetry_residuals(const DoubledModel& doubled, cplx t) {
  const BlockModel& model = doubled.base;
  const int n = model.units(), mm = model.block_size();
  const int blocks = 2 * n;
  const Matrix k_t = build_k(model, t);

  // J K(t) J with J the anti-diagonal block permutation.
  Matrix jkj(k_t.rows(), k_t.cols());
  for (int bi = 0; bi < blocks; ++bi)
    for (int bj = 0; bj < blocks; ++bj)
      jkj.block(bi * mm, bj * mm, mm, mm) = k_t.block((blocks - 1 - bi) * mm, (blocks - 1 - bj) * mm, mm, mm);
  const Matrix k_conj = build_k(model, std::conj(t));
  const double j_residual = (jkj - k_conj.adjoint()).cwiseAbs().maxCoeff();

  // S3 K(t) S3 with S3 = diag(I_{nm}, -I_{nm}).
  Matrix s3ks3 = k_t;
  s3ks3.topRightCorner(n * mm, n * mm) *= -1.0;
  s3ks3.bottomLeftCorner(n * mm, n * mm) *= -1.0;
  const Matrix k_inv_conj = build_k(model, 1.0 / std::conj(t));
  const double s3_residual = (s3ks3 - k_inv_conj.adjoint()).cwiseAbs().maxCoeff();

  const DenseSpectrum spec_t = dense_eigenvalues(k_t);
  const DenseSpectrum spec_inv = dense_eigenvalues(build_k(model, 1.0 / t));
  const double distance = spectral_multiset_distance(spec_t.eigenvalues, spec_inv.eigenvalues);
  return SymmetryResiduals{j_residual, s3_residual, distance};
}

}  // namespace andersonspec
