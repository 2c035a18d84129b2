#pragma once

// Reference computations written without the library's algorithms: direct
// sums, closed forms and Kronecker-vectorized solves.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include <fdmimo/fdmimo.hpp>

namespace oracle {

using fdmimo::ComplexMatrix;
using fdmimo::RealMatrix;
using fdmimo::cplx;

// O(L^2) DFT with long double accumulation, X[b] = sum x[n] e^{-2 pi i b n / L}.
inline std::vector<cplx> naive_dft(const std::vector<double>& x) {
  const std::size_t L = x.size();
  std::vector<cplx> out(L);
  for (std::size_t b = 0; b < L; ++b) {
    long double re = 0, im = 0;
    for (std::size_t n = 0; n < L; ++n) {
      const std::size_t ph = (b * n) % L;
      const long double a = -2.0L * std::numbers::pi_v<long double> *
                            static_cast<long double>(ph) / static_cast<long double>(L);
      re += x[n] * std::cos(a);
      im += x[n] * std::sin(a);
    }
    out[b] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

// |H(f)| of a bilinear-transformed Butterworth bandpass of prototype order n,
// from the prewarped analog magnitude.
inline double butterworth_bandpass_mag(double f, double fs, double lo, double hi, int n) {
  auto warp = [fs](double hz) { return 2.0 * fs * std::tan(std::numbers::pi * hz / fs); };
  const double W = warp(f), wl = warp(lo), wh = warp(hi);
  const double w0sq = wl * wh, bw = wh - wl;
  const double r = (W * W - w0sq) / (W * bw);
  return 1.0 / std::sqrt(1.0 + std::pow(r * r, n));
}

// Kronecker product, (A kron B).
inline ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

inline Eigen::VectorXcd vec(const ComplexMatrix& M) {
  return Eigen::Map<const Eigen::VectorXcd>(M.data(), M.size());
}

inline ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

// Minimizer of 0.5||Y - HX||^2 + 2 mu ||L H||^2 + nu ||H - Hp||^2 (receiver
// axis) or with the penalty on H^T (source axis), from the stationarity
// condition written as one dense linear system in vec(H).
inline ComplexMatrix stare_direct(const ComplexMatrix& Y, const ComplexMatrix& X,
                                  const ComplexMatrix& Hp, const RealMatrix& Lap,
                                  double mu, double nu, bool receiver_axis) {
  const Eigen::Index N = Y.rows(), P = X.rows();
  const ComplexMatrix R = X * X.adjoint();
  const ComplexMatrix S = (4.0 * mu * Lap.transpose() * Lap).cast<cplx>();
  const ComplexMatrix IN = ComplexMatrix::Identity(N, N);
  const ComplexMatrix IP = ComplexMatrix::Identity(P, P);
  ComplexMatrix A = kron(R.transpose(), IN) + 2.0 * nu * kron(IP, IN);
  A += receiver_axis ? kron(IP, S) : kron(S.transpose(), IN);
  const Eigen::VectorXcd rhs = vec(Y * X.adjoint() + 2.0 * nu * Hp);
  return unvec(A.fullPivLu().solve(rhs), N, P);
}

// Ridge regression min ||Y - HX||^2 + lambda ||H||^2 via least squares on the
// augmented system [X, sqrt(lambda) I]^T H^T = [Y, 0]^T.
inline ComplexMatrix ridge_augmented(const ComplexMatrix& Y, const ComplexMatrix& X,
                                     double lambda) {
  const Eigen::Index N = Y.rows(), P = X.rows(), M = X.cols();
  ComplexMatrix Aug(M + P, P);
  Aug.topRows(M) = X.transpose();
  Aug.bottomRows(P) = std::sqrt(lambda) * ComplexMatrix::Identity(P, P);
  ComplexMatrix B = ComplexMatrix::Zero(M + P, N);
  B.topRows(M) = Y.transpose();
  return Aug.completeOrthogonalDecomposition().solve(B).transpose();
}

// Elementwise sum of |Y - HX|^2 with the product expanded by hand.
inline double mse_elementwise(const ComplexMatrix& Y, const ComplexMatrix& H,
                              const ComplexMatrix& X) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < Y.rows(); ++n) {
    for (Eigen::Index m = 0; m < Y.cols(); ++m) {
      cplx acc = 0;
      for (Eigen::Index p = 0; p < X.rows(); ++p) acc += H(n, p) * X(p, m);
      s += std::norm(Y(n, m) - acc);
    }
  }
  return s;
}

// Laplacian by enumerating every node pair against an edge list.
inline RealMatrix laplacian_bruteforce(Eigen::Index n,
                                       const std::vector<std::pair<Eigen::Index, Eigen::Index>>& e1) {
  RealMatrix L = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      bool adj = false;
      for (const auto& [a, b] : e1) {
        if ((a - 1 == i && b - 1 == j) || (a - 1 == j && b - 1 == i)) adj = true;
      }
      if (adj) {
        L(i, j) = -1;
        L(i, i) += 1;
      }
    }
  }
  return L;
}

inline double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double d = b.norm();
  return d > 0 ? (a - b).norm() / d : (a - b).norm();
}

}  // namespace oracle
