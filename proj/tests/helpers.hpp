#pragma once

#include <cmath>

#include <doctest.h>

#include "qcont/random.hpp"

namespace qt {

using namespace qcont;

inline DensityMatrix diag2(double a, double b) {
  const double p[2] = {a, b};
  return DensityMatrix::diagonal(p);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// Random Hermitian matrix with Gaussian entries.
inline Matrix random_hermitian(int d, Rng& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

/// Smallest eigenvalue by plain eigensolver, independent of the library helpers.
inline double min_eig(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace qt
