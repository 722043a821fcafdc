#include "andersonspec/transfer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "andersonspec/errors.hpp"

namespace andersonspec {

namespace {

Matrix factor_t(const Matrix& a, cplx eps) {
  const int m = static_cast<int>(a.rows());
  Matrix f = Matrix::Zero(2 * m, 2 * m);
  f.topLeftCorner(m, m) = eps * Matrix::Identity(m, m) - a;
  f.topRightCorner(m, m) = -Matrix::Identity(m, m);
  f.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return f;
}

Matrix factor_u(const Matrix& a, cplx eps) {
  const int m = static_cast<int>(a.rows());
  Matrix f = Matrix::Zero(2 * m, 2 * m);
  f.topLeftCorner(m, m) = a - eps * Matrix::Identity(m, m);
  f.topRightCorner(m, m) = -Matrix::Identity(m, m);
  f.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return f;
}

Matrix factor_sigma(const Matrix& b) {
  const int m = static_cast<int>(b.rows());
  Matrix f = Matrix::Zero(2 * m, 2 * m);
  f.topLeftCorner(m, m) = b.partialPivLu().inverse();
  f.bottomRightCorner(m, m) = b.adjoint();
  return f;
}

void check_overflow_guard(const BlockModel& model, cplx eps) {
  double max_log_norm = 0.0;
  for (int k = 0; k < model.units(); ++k) {
    const Matrix& b_prev = model.b((k + model.units() - 1) % model.units());
    const Matrix f = single_factor(model.a(k), model.b(k), b_prev, eps);
    max_log_norm = std::max(max_log_norm, std::log(std::max(f.norm(), 1.0)));
  }
  if (model.units() * max_log_norm >= 600.0) {
    std::ostringstream msg;
    msg << "build_transfer: n * max log||factor|| = " << model.units() * max_log_norm
        << " >= 600; the raw product would overflow. Use the spectral (Jensen-average) route instead.";
    throw OverflowRisk(msg.str());
  }
}

}  // namespace

double ExponentSpectrum::mean_positive() const {
  double sum = 0.0;
  const std::size_t half = values.size() / 2;
  for (double v : values)
    if (v > 0.0) sum += v;
  return half > 0 ? sum / static_cast<double>(half) : 0.0;
}

Matrix single_factor(const Matrix& a, const Matrix& b, const Matrix& b_prev, cplx eps) {
  const int m = static_cast<int>(a.rows());
  const Matrix b_inv = b.partialPivLu().inverse();
  Matrix f = Matrix::Zero(2 * m, 2 * m);
  f.topLeftCorner(m, m) = b_inv * (eps * Matrix::Identity(m, m) - a);
  f.topRightCorner(m, m) = -b_inv * b_prev.adjoint();
  f.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return f;
}

TransferOperator build_transfer(const BlockModel& model, cplx eps) {
  check_overflow_guard(model, eps);
  const int n = model.units(), m = model.block_size();
  Matrix product = Matrix::Identity(2 * m, 2 * m);
  for (int k = 0; k < n; ++k) {
    const Matrix& b_prev = model.b((k + n - 1) % n);
    product = single_factor(model.a(k), model.b(k), b_prev, eps) * product;
  }
  return TransferOperator{std::move(product), eps, m, n};
}

SymplecticForm symplectic_form(const BlockModel& model) {
  const int m = model.block_size();
  const Matrix& bn = model.b(model.units() - 1);
  Matrix sigma = Matrix::Zero(2 * m, 2 * m);
  sigma.topRightCorner(m, m) = -bn.adjoint();
  sigma.bottomLeftCorner(m, m) = bn;
  Matrix inverse = Matrix::Zero(2 * m, 2 * m);
  inverse.topRightCorner(m, m) = bn.partialPivLu().inverse();
  inverse.bottomLeftCorner(m, m) = -bn.adjoint().partialPivLu().inverse();
  return SymplecticForm{std::move(sigma), std::move(inverse)};
}

std::pair<double, double> symplectic_residuals(const BlockModel& model, cplx eps) {
  const SymplecticForm form = symplectic_form(model);
  const Matrix t = build_transfer(model, eps).matrix;
  const Matrix t_conj = build_transfer(model, std::conj(eps)).matrix;
  const double first = (t_conj.adjoint() * form.matrix * t - form.matrix).cwiseAbs().maxCoeff();
  const double second = (t * form.inverse * t_conj.adjoint() - form.inverse).cwiseAbs().maxCoeff();
  return {first, second};
}

ExponentSpectrum exponents_direct(const TransferOperator& transfer) {
  const DenseSpectrum spectrum = dense_eigenvalues(transfer.matrix);
  ExponentSpectrum result;
  result.kind = ExponentKind::TExponents;
  result.energy = transfer.energy;
  result.values.reserve(spectrum.eigenvalues.size());
  for (const cplx& lambda : spectrum.eigenvalues) {
    const double mag = std::abs(lambda);
    if (!(mag >= kPivotFloor))
      throw ZeroEigenvalue("exponents_direct: transfer eigenvalue has modulus below 1e-300");
    result.values.push_back(std::log(mag) / transfer.n);
  }
  std::sort(result.values.begin(), result.values.end());
  return result;
}

TransferOperator build_q(const BlockModel& model, cplx eps) {
  if (!model.corner_unitary()) throw NotUnitaryCorner("build_q: corner bond B_n must be unitary");
  const int n = model.units(), m = model.block_size();
  if (model.identity_bonds()) {
    const TransferOperator t = build_transfer(model, eps);
    const TransferOperator t_conj = build_transfer(model, std::conj(eps));
    return TransferOperator{t_conj.matrix.adjoint() * t.matrix, eps, m, n};
  }
  check_overflow_guard(model, eps);
  check_overflow_guard(model, std::conj(eps));
  // Factored form: (-1)^n diag(I,B_n) u_1 s_1^dag ... s_{n-1}^dag u_n
  //                (B_n B_n^dag)^{-1} t_n s_{n-1} ... s_1 t_1 diag(I,B_n^dag).
  const Matrix& bn = model.b(n - 1);
  Matrix left = Matrix::Identity(2 * m, 2 * m);
  left.bottomRightCorner(m, m) = bn;
  Matrix right = Matrix::Identity(2 * m, 2 * m);
  right.bottomRightCorner(m, m) = bn.adjoint();

  Matrix middle_u = factor_u(model.a(0), eps);
  for (int k = 1; k < n; ++k) middle_u = middle_u * factor_sigma(model.b(k - 1)).adjoint() * factor_u(model.a(k), eps);

  Matrix middle_t = factor_t(model.a(n - 1), eps);
  for (int k = n - 2; k >= 0; --k) middle_t = middle_t * factor_sigma(model.b(k)) * factor_t(model.a(k), eps);

  Matrix corner = Matrix::Identity(2 * m, 2 * m);
  corner.topLeftCorner(m, m) = (bn * bn.adjoint()).partialPivLu().inverse();

  Matrix q = left * middle_u * corner * middle_t * right;
  if (n % 2 != 0) q = -q;
  return TransferOperator{std::move(q), eps, m, n};
}

ExponentSpectrum lyapunov_oracle(const std::function<Matrix(long)>& blocks, int m, double eps,
                                 const OracleOptions& options) {
  if (static_cast<double>(options.total_length) * options.reorth_period > options.budget) {
    std::ostringstream msg;
    msg << "lyapunov_oracle: total_length * reorth_period = "
        << static_cast<double>(options.total_length) * options.reorth_period << " exceeds budget " << options.budget;
    throw BudgetExceeded(msg.str());
  }
  const int d = 2 * m;
  Matrix frame = Matrix::Identity(d, d);
  std::vector<double> log_sums(static_cast<std::size_t>(d), 0.0);
  std::vector<std::vector<double>> chunk_rates(static_cast<std::size_t>(d));
  long accumulated = 0;
  long chunk_count = 0;
  long site = 0;
  long warmup_left = static_cast<long>(options.warmup_chunks) * options.reorth_period;

  while (accumulated < options.total_length) {
    long span = std::min<long>(options.reorth_period, options.total_length - accumulated);
    if (warmup_left > 0) span = std::min<long>(span, warmup_left);
    long done = 0;
    while (done < span) {
      frame = factor_t(blocks(site++), cplx(eps, 0.0)) * frame;
      ++done;
      // Condition monitor: trigger early QR when column norms spread too far.
      const double cmax = frame.colwise().norm().maxCoeff();
      const double cmin = frame.colwise().norm().minCoeff();
      if (cmax > options.condition_cap * std::max(cmin, 1e-30)) break;
    }
    const bool record = warmup_left <= 0;
    Eigen::HouseholderQR<Matrix> qr(frame);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      const cplx rii = r(i, i);
      const double mag = std::abs(rii);
      if (record) {
        const double v = std::log(std::max(mag, kPivotFloor));
        log_sums[static_cast<std::size_t>(i)] += v;
        chunk_rates[static_cast<std::size_t>(i)].push_back(v / done);
      }
      // Keep diag(R) >= 0 so the frame orientation is stable chunk to chunk.
      if (mag > 0.0) q.col(i) *= rii / mag;
    }
    frame = std::move(q);
    if (record) {
      accumulated += done;
      ++chunk_count;
    } else {
      warmup_left -= done;
    }
  }

  ExponentSpectrum result;
  result.kind = ExponentKind::LyapunovOracle;
  result.energy = cplx(eps, 0.0);
  std::vector<std::pair<double, double>> with_errors(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double mean = log_sums[static_cast<std::size_t>(i)] / accumulated;
    double var = 0.0;
    for (double r : chunk_rates[static_cast<std::size_t>(i)]) var += (r - mean) * (r - mean);
    const double se = chunk_count > 1 ? std::sqrt(var / (chunk_count - 1) / chunk_count) : 0.0;
    with_errors[static_cast<std::size_t>(i)] = {mean, se};
  }
  std::sort(with_errors.begin(), with_errors.end());
  for (const auto& [v, se] : with_errors) {
    result.values.push_back(v);
    result.std_errors.push_back(se);
  }
  return result;
}

cplx ZeroDisorderClosedForm::root(int k) const {
  const cplx half_trace = cplx(energy - lambdas[static_cast<std::size_t>(k)], 0.0) / 2.0;
  const cplx disc = std::sqrt(half_trace * half_trace - 1.0);
  const cplx z1 = half_trace + disc;
  const cplx z2 = half_trace - disc;
  return std::abs(z1) >= std::abs(z2) ? z1 : z2;
}

ExponentSpectrum zero_disorder_q_exponents(const ZeroDisorderClosedForm& cf, int n) {
  ExponentSpectrum result;
  result.kind = ExponentKind::QExponents;
  result.energy = cplx(cf.energy, 0.0);
  for (int k = 0; k < static_cast<int>(cf.lambdas.size()); ++k) {
    const cplx z = cf.root(k);
    const cplx z2 = z * z;
    if (std::abs(z2 - 1.0) < 1e-8)
      throw BandEdge("zero_disorder_q_exponents: channel " + std::to_string(k) + " sits at a band edge");
    const cplx ratio = (z2 + 1.0) / (z2 - 1.0);
    // w + 1/w in log-safe form: z^{2n} can be huge, so assemble from logs.
    const double log_z2n = 2.0 * n * std::log(std::abs(z));
    double log_abs_w;
    if (log_z2n > 40.0) {
      // w ~ z^{2n} ratio^2 up to O(z^{-2n}) corrections.
      log_abs_w = log_z2n + 2.0 * std::log(std::abs(ratio));
    } else {
      const cplx c = (std::pow(z, 2.0 * n) + std::pow(z, -2.0 * n)) * ratio * ratio - 8.0 * z2 / ((z2 - 1.0) * (z2 - 1.0));
      const cplx disc = std::sqrt(c * c - 4.0);
      const cplx w1 = (c + disc) / 2.0;
      const cplx w2 = (c - disc) / 2.0;
      log_abs_w = std::log(std::max(std::abs(w1), std::abs(w2)));
    }
    const double gamma = std::abs(log_abs_w) / (2.0 * n);
    result.values.push_back(gamma);
    result.values.push_back(-gamma);
  }
  std::sort(result.values.begin(), result.values.end());
  return result;
}

}  // namespace andersonspec
