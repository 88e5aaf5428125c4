#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dpsqm {

using Complex = std::complex<double>;
using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;
using DenseReal = Eigen::MatrixXd;
using DenseComplex = Eigen::MatrixXcd;
using VecReal = Eigen::VectorXd;
using VecComplex = Eigen::VectorXcd;

}  // namespace dpsqm
