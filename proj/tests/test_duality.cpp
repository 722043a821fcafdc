#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "andersonspec/anderson.hpp"
#include "andersonspec/duality.hpp"
#include "andersonspec/errors.hpp"
#include "andersonspec/transfer.hpp"
#include "oracles.hpp"

using namespace andersonspec;
using testing_oracles::ModelGen;

TEST_CASE("determinant duality holds on randomized instances") {
  ModelGen gen(31);
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(gen.rng() % 4);
    const int m = 1 + static_cast<int>(gen.rng() % 3);
    const BlockModel model = gen.model(n, m);
    const cplx eps(2.0 * gen.uni(), 2.0 * gen.uni());
    const cplx s = std::polar(std::exp(gen.uni() * n), std::numbers::pi * gen.uni());
    CHECK(duality_residual(model, eps, s) < 1e-8);
  }
}

TEST_CASE("both duality sides vanish at an exact eigenvalue") {
  anderson::AndersonConfig config;
  config.dims = {6};
  const BoundaryFactor bf{0.8, 0.4};
  // Closed-form eigenvalue of the clean ring at this twist.
  const cplx eps = anderson::zero_disorder_spectrum(config, bf).front();
  const BlockModel model = anderson::build_anderson(config);
  const cplx s = bf.corner_multiplier(6);
  const DualitySides at_eig = duality_sides(model, eps, s);
  const DualitySides nearby = duality_sides(model, eps + cplx(0.1, 0.0), s);
  const double rescale = std::exp(nearby.log_scale - at_eig.log_scale);
  CHECK(std::abs(at_eig.lhs) < 1e-8 * std::abs(nearby.lhs) * rescale);
  CHECK(std::abs(at_eig.rhs) < 1e-8 * std::abs(nearby.rhs) * rescale);
}

TEST_CASE("scalar reduction: det[eps I - H(s)] = tr T - (s + 1/s)") {
  anderson::AndersonConfig config;
  config.dims = {7};
  config.w = 4.0;
  config.seed = 17;
  const BlockModel model = anderson::build_anderson(config);
  ModelGen gen(32);
  for (int i = 0; i < 10; ++i) {
    const cplx eps(2.0 * gen.uni(), gen.uni());
    const cplx s = std::polar(std::exp(gen.uni()), std::numbers::pi * gen.uni());
    const BoundaryFactor bf{std::log(std::abs(s)) / 7, std::arg(s)};
    const cplx det = std::exp(shifted_log_det(model, bf, eps));
    const cplx trace = build_transfer(model, eps).matrix.trace();
    CHECK(std::abs(det - (trace - s - 1.0 / s)) < 1e-8 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("eigenvalue-level duality: s is an eigenvalue of T at every eigenvalue of H(s)") {
  ModelGen gen(33);
  for (int i = 0; i < 10; ++i) {
    const int n = 3 + static_cast<int>(gen.rng() % 3);
    const int m = 1 + static_cast<int>(gen.rng() % 2);
    const BlockModel model = gen.model(n, m);
    const cplx s = std::polar(std::exp(gen.uni()), std::numbers::pi * gen.uni());
    const BoundaryFactor bf{std::log(std::abs(s)) / n, std::arg(s)};
    const auto spectrum = dense_eigenvalues(realize_h_balanced(model, bf));
    for (const cplx& eps : spectrum.eigenvalues) {
      const auto lambda = dense_eigenvalues(build_transfer(model, eps).matrix);
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& l : lambda.eigenvalues) best = std::min(best, std::abs(l - s));
      CHECK(best < 1e-6 * (1.0 + std::abs(s)));
    }
  }
}

TEST_CASE("the explicit 6x6 doubled matrix at m = 1, n = 3") {
  anderson::AndersonConfig config;
  config.dims = {3};
  const BlockModel model = anderson::build_anderson(config);
  const Matrix out = build_m(model, cplx(0.0, 0.0), cplx(1.0, 0.0));
  Matrix expected(6, 6);
  expected << 0, 1, 0, 0, 0, 1,  //
      1, 0, 1, 0, 0, 0,          //
      0, 1, 0, 1, 0, 0,          //
      0, 0, 1, 0, 1, 0,          //
      0, 0, 0, 1, 0, 1,          //
      1, 0, 0, 0, 1, 0;
  CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-15);
  // The two chains carry eps with opposite signs: the spectrum of M(eps, 1)
  // is symmetric under eps -> -eps.
  const auto plus = dense_eigenvalues(build_m(model, cplx(0.7, 0.0), cplx(1.0, 0.0)));
  const auto minus = dense_eigenvalues(build_m(model, cplx(-0.7, 0.0), cplx(1.0, 0.0)));
  CHECK(spectral_multiset_distance(plus.eigenvalues, minus.eigenvalues) < 1e-8);
}

TEST_CASE("doubled-matrix duality: det M against det[Q - (-1)^n s]") {
  ModelGen gen(34);
  for (int i = 0; i < 10; ++i) {
    const int n = 3 + static_cast<int>(gen.rng() % 2);
    const int m = 1 + static_cast<int>(gen.rng() % 2);
    const BlockModel model = gen.model(n, m, /*unitary_corner=*/true);
    const cplx eps(gen.uni(), gen.uni());
    const cplx s = std::polar(std::exp(gen.uni()), std::numbers::pi * gen.uni());
    const cplx log_lhs = log_det(build_m(model, eps, s)) - 2.0 * model.log_abs_det_b_total();
    Matrix shifted = build_q(model, eps).matrix;
    shifted.diagonal().array() -= (n % 2 == 0 ? s : -s);
    cplx log_rhs = log_det(shifted) - static_cast<double>(m) * std::log(s);
    if (m % 2 != 0) log_rhs += cplx(0.0, std::numbers::pi);
    const double scale = std::max(log_lhs.real(), log_rhs.real());
    const cplx lhs = std::exp(log_lhs - scale), rhs = std::exp(log_rhs - scale);
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(std::abs(lhs), std::abs(rhs)));
  }
}

TEST_CASE("shifted duality: det[K(t) - eps I] against det[Q - t I]") {
  ModelGen gen(35);
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(gen.rng() % 3);
    const int m = 1 + static_cast<int>(gen.rng() % 2);
    const BlockModel model = gen.model(n, m, /*unitary_corner=*/true);
    const cplx eps(gen.uni(), gen.uni());
    const cplx t = std::polar(std::exp(gen.uni()), std::numbers::pi * gen.uni());
    Matrix k = build_k(model, t);
    k.diagonal().array() -= eps;
    const cplx log_lhs = log_det(k) - 2.0 * model.log_abs_det_b_total();
    Matrix shifted = build_q(model, eps).matrix;
    shifted.diagonal().array() -= t;
    cplx log_rhs = log_det(shifted) - static_cast<double>(m) * std::log(t);
    if (m % 2 != 0) log_rhs += cplx(0.0, std::numbers::pi);
    const double scale = std::max(log_lhs.real(), log_rhs.real());
    const cplx lhs = std::exp(log_lhs - scale), rhs = std::exp(log_rhs - scale);
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(std::abs(lhs), std::abs(rhs)));
  }
}

TEST_CASE("balanced K determinant equals the raw one") {
  ModelGen gen(36);
  const BlockModel model = gen.model(4, 2, /*unitary_corner=*/true);
  const cplx eps(0.3, -0.2);
  for (double xi : {0.0, 0.4, 1.1}) {
    for (double phi : {0.0, 1.7}) {
      const cplx t = std::exp(cplx(2.0 * 4 * xi, phi));
      Matrix k = build_k(model, t);
      k.diagonal().array() -= eps;
      const cplx raw = log_det(k);
      const cplx balanced = log_det_k_shifted(model, xi, phi, eps);
      CHECK(std::abs(raw.real() - balanced.real()) < 1e-8 * std::max(1.0, std::abs(raw.real())));
    }
  }
}

TEST_CASE("structural conjugations of K") {
  ModelGen gen(37);
  SUBCASE("residuals are exact on random instances") {
    for (int i = 0; i < 10; ++i) {
      const int n = 3 + static_cast<int>(gen.rng() % 2);
      const int m = 1 + static_cast<int>(gen.rng() % 2);
      const DoubledModel doubled{gen.model(n, m, /*unitary_corner=*/true)};
      const cplx t = std::polar(std::exp(gen.uni()), std::numbers::pi * gen.uni());
      const SymmetryResiduals res = symmetry_residuals(doubled, t);
      CHECK(res.j_residual < 1e-12);
      CHECK(res.s3_residual < 1e-12);
      CHECK(res.spectral_distance < 1e-7);
    }
  }
  SUBCASE("|t| = 1: K(1/t*) coincides with K(t)") {
    const DoubledModel doubled{gen.model(3, 2, /*unitary_corner=*/true)};
    const cplx t = std::polar(1.0, 0.9);
    const Matrix a = build_k(doubled.base, t);
    const Matrix b = build_k(doubled.base, 1.0 / std::conj(t));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
    const SymmetryResiduals res = symmetry_residuals(doubled, t);
    CHECK(res.j_residual < 1e-12);
    CHECK(res.s3_residual < 1e-12);
  }
  SUBCASE("anderson strip at a generic radius") {
    anderson::AndersonConfig config;
    config.dims = {2, 4};
    config.w = 5.0;
    config.seed = 23;
    const DoubledModel doubled{anderson::build_anderson(config)};
    const SymmetryResiduals res = symmetry_residuals(doubled, std::polar(1.3, 0.4));
    CHECK(res.j_residual < 1e-12);
    CHECK(res.s3_residual < 1e-12);
    CHECK(res.spectral_distance < 1e-7);
  }
}

TEST_CASE("symmetry witnesses are involutions and reproduce the conjugations") {
  ModelGen gen(40);
  const BlockModel model = gen.model(3, 2, /*unitary_corner=*/true);
  const SymmetryWitness witness = symmetry_witness(model);
  CHECK((witness.j * witness.j - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((witness.s3 * witness.s3 - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
  const cplx t = std::polar(1.4, 0.8);
  const Matrix k_t = build_k(model, t);
  CHECK((witness.j * k_t * witness.j - build_k(model, std::conj(t)).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((witness.s3 * k_t * witness.s3 - build_k(model, 1.0 / std::conj(t)).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed-form channel roots satisfy their quadratic") {
  const ZeroDisorderClosedForm cf{{-1.0, 0.0, 1.0}, 4.0};
  for (int k = 0; k < 3; ++k) {
    const cplx z = cf.root(k);
    CHECK(std::abs(z * z - (4.0 - cf.lambdas[static_cast<std::size_t>(k)]) * z + 1.0) < 1e-12);
    CHECK(std::abs(z) >= 1.0);
  }
}

TEST_CASE("K construction requires the unitary corner") {
  ModelGen gen(38);
  const BlockModel model = gen.model(3, 2, /*unitary_corner=*/false);
  CHECK_THROWS_AS(build_k(model, cplx(1.0, 0.0)), NotUnitaryCorner);
  CHECK_THROWS_AS(build_m(model, cplx(0.0, 0.0), cplx(1.0, 0.0)), NotUnitaryCorner);
}

TEST_CASE("duality sweep across radii, sizes and energies") {
  ModelGen gen(39);
  for (double log_radius : {std::log(0.5), 0.0, std::log(2.0)}) {
    for (int m : {1, 2, 3}) {
      for (int n : {3, 4, 6}) {
        const BlockModel model = gen.model(n, m);
        const cplx eps(2.0 * gen.uni(), gen.uni());
        const cplx s = std::polar(std::exp(log_radius), std::numbers::pi * gen.uni());
        CHECK(duality_residual(model, eps, s) < 1e-8);
      }
    }
  }
  for (int n : {3, 4, 6}) {
    const BlockModel model = gen.model(n, 2);
    const cplx s = std::polar(std::exp(static_cast<double>(n)), 0.3);
    CHECK(duality_residual(model, cplx(0.4, 0.1), s) < 1e-8);
  }
}
