#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fdmimo {

using cplx = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Channels x time, each channel contiguous.
using SampleMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace fdmimo
