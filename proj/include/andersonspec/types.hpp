#pragma once

#include <Eigen/Dense>
#include <complex>

namespace andersonspec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPivotFloor = 1e-300;

}  // namespace andersonspec
